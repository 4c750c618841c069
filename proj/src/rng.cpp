#include "pocs/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace pocs {

ComplexMatrix sample_complex_gaussian(RngStream& rng, Index m, Index n) {
  if (m < 1 || n < 1) {
    throw InvalidParameter("sample_complex_gaussian: dimensions must be >= 1, got " +
                           std::to_string(m) + "x" + std::to_string(n));
  }
  ComplexMatrix out(m, n);
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < n; ++l) {
      const double re = rng.normal();
      const double im = rng.normal();
      out(k, l) = Complex(re, im);
    }
  }
  return out;
}

RealVector sample_sparse_signal(RngStream& rng, Index n, Index s) {
  if (n < 1 || s < 1 || s > n) {
    throw InvalidParameter("sample_sparse_signal: need 1 <= s <= n, got s=" + std::to_string(s) +
                           ", n=" + std::to_string(n));
  }
  // Partial Fisher-Yates: the first s slots end up a uniform size-s subset.
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    const Index j = i + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  RealVector x = RealVector::Zero(n);
  for (Index i = 0; i < s; ++i) {
    double value = rng.normal();
    while (value == 0.0) value = rng.normal();  // keep the support size exact
    x[idx[static_cast<std::size_t>(i)]] = value;
  }
  return x;
}

}  // namespace pocs
