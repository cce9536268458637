#include "sparsemax/jacobian.hpp"

#include <string>

#include "sparsemax/errors.hpp"

namespace smax {

namespace {

void check_support(const SupportSet& support, std::size_t dim) {
  if (support.indices.empty()) throw InvalidInput("support set is empty");
  for (std::size_t j : support.indices) {
    if (j >= dim) {
      throw InvalidInput("support index " + std::to_string(j) +
                         " out of range for dimension " + std::to_string(dim));
    }
  }
}

}  // namespace

Vector JacobianMatrix::apply(std::span<const double> v) const {
  if (v.size() != dim_) throw InvalidInput("dimension mismatch in J*v");
  Vector out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += values_[i * dim_ + j] * v[j];
    out[i] = acc;
  }
  return out;
}

JacobianMatrix softmax_jacobian(std::span<const double> p) {
  check_probabilities(p);
  JacobianMatrix jac(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      jac(i, j) = (i == j ? p[i] : 0.0) - p[i] * p[j];
    }
  }
  return jac;
}

JacobianMatrix sparsemax_jacobian(const SupportSet& support, std::size_t dim) {
  check_support(support, dim);
  JacobianMatrix jac(dim);
  const double inv = 1.0 / static_cast<double>(support.size());
  for (std::size_t i : support.indices) {
    for (std::size_t j : support.indices) {
      jac(i, j) = (i == j ? 1.0 : 0.0) - inv;
    }
  }
  return jac;
}

Vector softmax_jvp(std::span<const double> p, std::span<const double> v) {
  if (p.size() != v.size()) throw InvalidInput("dimension mismatch in JVP");
  double vbar = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) vbar += p[j] * v[j];
  Vector out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) out[j] = p[j] * (v[j] - vbar);
  return out;
}

namespace {

// Shared JVP kernel. `read` fetches v[j]; `write` stores the r-th nonzero.
template <typename Read, typename Write>
void sparsemax_jvp_kernel(const SupportSet& support, Read read, Write write) {
  double vhat = 0.0;
  for (std::size_t j : support.indices) vhat += read(j);
  vhat /= static_cast<double>(support.size());
  for (std::size_t r = 0; r < support.size(); ++r) {
    write(r, read(support.indices[r]) - vhat);
  }
}

}  // namespace

Vector sparsemax_jvp_on_support(const SupportSet& support,
                                std::span<const double> v,
                                JvpCounter* counter) {
  check_support(support, v.size());
  Vector out(support.size());
  if (counter == nullptr) {
    sparsemax_jvp_kernel(
        support, [&](std::size_t j) { return v[j]; },
        [&](std::size_t r, double x) { out[r] = x; });
  } else {
    sparsemax_jvp_kernel(
        support,
        [&](std::size_t j) {
          ++counter->reads;
          return v[j];
        },
        [&](std::size_t r, double x) {
          ++counter->writes;
          out[r] = x;
        });
  }
  return out;
}

Vector sparsemax_jvp(const SupportSet& support, std::span<const double> v,
                     JvpCounter* counter) {
  const Vector nz = sparsemax_jvp_on_support(support, v, counter);
  Vector out(v.size(), 0.0);
  for (std::size_t r = 0; r < support.size(); ++r) {
    out[support.indices[r]] = nz[r];
  }
  return out;
}

}  // namespace smax
