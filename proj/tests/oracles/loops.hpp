#pragma once

// Index-by-index reference implementations of the kernel proxies. They read the flat state
// through their own index arithmetic ([s][e][xi][th][ky][kx], kx fastest) rather than the
// library accessors.

#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct Dims {
  std::size_t kx, ky, th, xi, e, s;

  std::size_t at(std::size_t is, std::size_t ie, std::size_t ixi, std::size_t ith, std::size_t iky,
                 std::size_t ikx) const {
    std::size_t i = is;
    i = i * e + ie;
    i = i * xi + ixi;
    i = i * th + ith;
    i = i * ky + iky;
    return i * kx + ikx;
  }
  std::size_t total() const { return kx * ky * th * xi * e * s; }
  std::size_t velocity() const { return xi * e * s; }
};

/// weights indexed [s][e][xi]
inline std::vector<cplx> field(const Dims& d, const std::vector<cplx>& h, const std::vector<double>& w) {
  std::vector<cplx> out(d.th * d.ky * d.kx);
  for (std::size_t ith = 0; ith < d.th; ++ith)
    for (std::size_t iky = 0; iky < d.ky; ++iky)
      for (std::size_t ikx = 0; ikx < d.kx; ++ikx) {
        cplx acc{};
        for (std::size_t is = 0; is < d.s; ++is)
          for (std::size_t ie = 0; ie < d.e; ++ie)
            for (std::size_t ixi = 0; ixi < d.xi; ++ixi)
              acc += w[(is * d.e + ie) * d.xi + ixi] * h[d.at(is, ie, ixi, ith, iky, ikx)];
        out[(ith * d.ky + iky) * d.kx + ikx] = acc;
      }
  return out;
}

inline std::vector<cplx> stream(const Dims& d, const std::vector<cplx>& h, const std::vector<double>& c) {
  const long half = static_cast<long>(c.size() / 2);
  const long n = static_cast<long>(d.th);
  std::vector<cplx> out(d.total());
  for (std::size_t is = 0; is < d.s; ++is)
    for (std::size_t ie = 0; ie < d.e; ++ie)
      for (std::size_t ixi = 0; ixi < d.xi; ++ixi)
        for (long ith = 0; ith < n; ++ith)
          for (std::size_t iky = 0; iky < d.ky; ++iky)
            for (std::size_t ikx = 0; ikx < d.kx; ++ikx) {
              cplx acc{};
              for (long k = -half; k <= half; ++k) {
                const auto src = static_cast<std::size_t>(((ith + k) % n + n) % n);
                acc += c[static_cast<std::size_t>(k + half)] * h[d.at(is, ie, ixi, src, iky, ikx)];
              }
              out[d.at(is, ie, ixi, static_cast<std::size_t>(ith), iky, ikx)] = acc;
            }
  return out;
}

inline std::vector<cplx> shear(const Dims& d, const std::vector<cplx>& h, const std::vector<long>& shift) {
  std::vector<cplx> out(d.total());
  for (std::size_t is = 0; is < d.s; ++is)
    for (std::size_t ie = 0; ie < d.e; ++ie)
      for (std::size_t ixi = 0; ixi < d.xi; ++ixi)
        for (std::size_t ith = 0; ith < d.th; ++ith)
          for (std::size_t iky = 0; iky < d.ky; ++iky)
            for (std::size_t ikx = 0; ikx < d.kx; ++ikx) {
              const long src = static_cast<long>(ikx) + shift[iky];
              if (src >= 0 && src < static_cast<long>(d.kx)) {
                out[d.at(is, ie, ixi, ith, iky, ikx)] = h[d.at(is, ie, ixi, ith, iky, static_cast<std::size_t>(src))];
              }
            }
  return out;
}

/// matrices indexed [th][row][col], rows and columns running over (s, e, xi)
inline std::vector<cplx> collision(const Dims& d, const std::vector<cplx>& h, const std::vector<double>& a) {
  const std::size_t m = d.velocity();
  std::vector<cplx> out(d.total());
  for (std::size_t ith = 0; ith < d.th; ++ith)
    for (std::size_t iky = 0; iky < d.ky; ++iky)
      for (std::size_t ikx = 0; ikx < d.kx; ++ikx)
        for (std::size_t row = 0; row < m; ++row) {
          cplx acc{};
          for (std::size_t col = 0; col < m; ++col) {
            const std::size_t cs = col / (d.e * d.xi), ce = (col / d.xi) % d.e, cx = col % d.xi;
            acc += a[(ith * m + row) * m + col] * h[d.at(cs, ce, cx, ith, iky, ikx)];
          }
          const std::size_t rs = row / (d.e * d.xi), re = (row / d.xi) % d.e, rx = row % d.xi;
          out[d.at(rs, re, rx, ith, iky, ikx)] = acc;
        }
  return out;
}

}  // namespace oracle
