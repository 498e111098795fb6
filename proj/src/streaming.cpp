#include "latticebolt/streaming.hpp"

#include <algorithm>

namespace lbm {

StreamStrategy resolve_strategy(StreamStrategy s, const DomainDims& dims) {
  if (s.tile_width == 0) s.tile_width = std::min(dims.nx, 256);
  if (s.tile_width < 1) throw ConfigError("tile width must be at least 1");
  if (s.lane_width < 1) throw ConfigError("lane width must be at least 1");
  return s;
}

namespace {

template <typename T>
void shift_line_direct(const T* in, std::ptrdiff_t is, T* out,
                       std::ptrdiff_t os, int nx, int dx, Wrap wrap) {
  const int lo = dx > 0 ? dx : 0;
  const int hi = nx - 1 + (dx < 0 ? dx : 0);
  for (int x = lo; x <= hi; ++x) out[x * os] = in[(x - dx) * is];
  if (wrap == Wrap::Periodic) {
    if (dx > 0) out[0] = in[std::ptrdiff_t(nx - 1) * is];
    if (dx < 0) out[std::ptrdiff_t(nx - 1) * os] = in[0];
  }
}

template <typename T>
void shift_line_tile(const T* in, std::ptrdiff_t is, T* out, std::ptrdiff_t os,
                     int nx, int dx, Wrap wrap, const StreamStrategy& strat,
                     std::vector<T>& scratch) {
  const int W = strat.tile_width;
  assert(static_cast<int>(scratch.size()) >= W + 2);
  const bool per = wrap == Wrap::Periodic;
  const int lo = per ? 0 : (dx > 0 ? dx : 0);
  const int hi = per ? nx - 1 : nx - 1 + (dx < 0 ? dx : 0);
  for (int ts = 0; ts < nx; ts += W) {
    const int w = std::min(W, nx - ts);
    scratch[0] = (ts - 1 >= 0) ? in[std::ptrdiff_t(ts - 1) * is]
                : per          ? in[std::ptrdiff_t(nx - 1) * is]
                               : T(0);
    for (int k = 0; k < w; ++k) scratch[1 + k] = in[std::ptrdiff_t(ts + k) * is];
    scratch[w + 1] = (ts + w < nx) ? in[std::ptrdiff_t(ts + w) * is]
                     : per         ? in[0]
                                   : T(0);
    tile_shift(std::span<T>(scratch.data(), static_cast<std::size_t>(w) + 2), dx);
    const int blo = std::max(ts, lo);
    const int bhi = std::min(ts + w - 1, hi);
    for (int x = blo; x <= bhi; ++x) out[x * os] = scratch[1 + (x - ts)];
  }
}

template <typename T>
void shift_line_lane(const T* in, std::ptrdiff_t is, T* out, std::ptrdiff_t os,
                     int nx, int dx, Wrap wrap, const StreamStrategy& strat,
                     std::vector<T>& grp) {
  const int L = strat.lane_width;
  assert(static_cast<int>(grp.size()) >= L);
  const int ngroups = nx / L;
  const bool per = wrap == Wrap::Periodic;
  const int lo = per ? 0 : (dx > 0 ? dx : 0);
  const int hi = per ? nx - 1 : nx - 1 + (dx < 0 ? dx : 0);
  std::span<T> g(grp.data(), static_cast<std::size_t>(L));

  if (dx > 0) {
    T carry = per ? in[std::ptrdiff_t(nx - 1) * is] : T(0);
    for (int gi = 0; gi < ngroups; ++gi) {
      const int base = gi * L;
      for (int k = 0; k < L; ++k) g[k] = in[std::ptrdiff_t(base + k) * is];
      carry = lane_rotate_shift(g, 1, carry);
      const int blo = std::max(base, lo);
      const int bhi = std::min(base + L - 1, hi);
      for (int x = blo; x <= bhi; ++x) out[x * os] = g[x - base];
    }
    for (int x = std::max(ngroups * L, 1); x <= hi; ++x)
      out[x * os] = in[std::ptrdiff_t(x - 1) * is];
    if (per && ngroups == 0) out[0] = in[std::ptrdiff_t(nx - 1) * is];
  } else {
    const int tlo = std::max(ngroups * L, lo);
    for (int x = tlo; x <= std::min(hi, nx - 2); ++x)
      out[x * os] = in[std::ptrdiff_t(x + 1) * is];
    if (per && ngroups * L <= nx - 1)
      out[std::ptrdiff_t(nx - 1) * os] = in[0];
    T carry = (ngroups * L < nx) ? in[std::ptrdiff_t(ngroups * L) * is]
              : per              ? in[0]
                                 : T(0);
    for (int gi = ngroups - 1; gi >= 0; --gi) {
      const int base = gi * L;
      for (int k = 0; k < L; ++k) g[k] = in[std::ptrdiff_t(base + k) * is];
      carry = lane_rotate_shift(g, -1, carry);
      const int blo = std::max(base, lo);
      const int bhi = std::min(base + L - 1, hi);
      for (int x = blo; x <= bhi; ++x) out[x * os] = g[x - base];
    }
  }
}

}  // namespace

template <typename T>
void shift_line(const T* in, std::ptrdiff_t in_stride, T* out,
                std::ptrdiff_t out_stride, int nx, int dx, Wrap wrap,
                const StreamStrategy& strat, LineScratch<T>& scratch) {
  assert(dx >= -1 && dx <= 1);
  if (dx == 0) {
    for (int x = 0; x < nx; ++x) out[x * out_stride] = in[x * in_stride];
    return;
  }
  switch (strat.kind) {
    case StreamKind::Direct:
      shift_line_direct(in, in_stride, out, out_stride, nx, dx, wrap);
      break;
    case StreamKind::TileBuffered:
      shift_line_tile(in, in_stride, out, out_stride, nx, dx, wrap, strat,
                      scratch.tile);
      break;
    case StreamKind::LaneRotate:
      shift_line_lane(in, in_stride, out, out_stride, nx, dx, wrap, strat,
                      scratch.group);
      break;
  }
}

namespace {

template <typename T, bool Push>
void stream_field(std::span<const T> src, std::span<T> dst,
                  const DomainDims& dims, Layout layout,
                  const LatticeDescriptor& desc, const StreamStrategy& strat0,
                  Wrap wrap) {
  assert(src.size() == kQ * dims.cells());
  assert(dst.size() == src.size());
  StreamStrategy strat = resolve_strategy(strat0, dims);
  FieldIndexer idx = FieldIndexer::make(dims, layout);
  LineScratch<T> scratch;
  scratch.prepare(strat);
  const std::ptrdiff_t xs = idx.x_stride();
  for (int i = 0; i < kQ; ++i) {
    const auto& e = desc.velocities[i];
    for (int z = 0; z < dims.nz; ++z) {
      for (int y = 0; y < dims.ny; ++y) {
        // Pull: this (y, z) is the destination line. Push: it is the source.
        int oy = Push ? y + e[1] : y - e[1];
        int oz = Push ? z + e[2] : z - e[2];
        if (wrap == Wrap::Periodic) {
          oy = (oy + dims.ny) % dims.ny;
          oz = (oz + dims.nz) % dims.nz;
        } else if (oy < 0 || oy >= dims.ny || oz < 0 || oz >= dims.nz) {
          continue;
        }
        const T* in;
        T* out;
        if constexpr (Push) {
          in = src.data() + idx.line_start(i, y, z);
          out = dst.data() + idx.line_start(i, oy, oz);
        } else {
          in = src.data() + idx.line_start(i, oy, oz);
          out = dst.data() + idx.line_start(i, y, z);
        }
        shift_line(in, xs, out, xs, dims.nx, e[0], wrap, strat, scratch);
      }
    }
  }
}

}  // namespace

template <typename T>
void stream_pull(std::span<const T> src, std::span<T> dst,
                 const DomainDims& dims, Layout layout,
                 const LatticeDescriptor& desc, const StreamStrategy& strat,
                 Wrap wrap) {
  stream_field<T, false>(src, dst, dims, layout, desc, strat, wrap);
}

template <typename T>
void stream_push(std::span<const T> src, std::span<T> dst,
                 const DomainDims& dims, Layout layout,
                 const LatticeDescriptor& desc, const StreamStrategy& strat,
                 Wrap wrap) {
  stream_field<T, true>(src, dst, dims, layout, desc, strat, wrap);
}

template <typename T>
void fill_unknowns_by_reflection(std::span<const T> src, std::span<T> dst,
                                 const DomainDims& dims, Layout layout,
                                 const LatticeDescriptor& desc) {
  FieldIndexer idx = FieldIndexer::make(dims, layout);
  for (int z = 0; z < dims.nz; ++z) {
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x) {
        bool boundary = x == 0 || x == dims.nx - 1 || y == 0 ||
                        y == dims.ny - 1 || z == 0 || z == dims.nz - 1;
        if (!boundary) continue;
        std::uint32_t mask = unknown_direction_mask(x, y, z, dims, desc);
        for (int i = 1; i < kQ; ++i) {
          if (mask & (1u << i))
            dst[idx.at(i, x, y, z)] = src[idx.at(desc.opposite[i], x, y, z)];
        }
      }
    }
  }
}

template void shift_line<float>(const float*, std::ptrdiff_t, float*,
                                std::ptrdiff_t, int, int, Wrap,
                                const StreamStrategy&, LineScratch<float>&);
template void shift_line<double>(const double*, std::ptrdiff_t, double*,
                                 std::ptrdiff_t, int, int, Wrap,
                                 const StreamStrategy&, LineScratch<double>&);
template void stream_pull<float>(std::span<const float>, std::span<float>,
                                 const DomainDims&, Layout,
                                 const LatticeDescriptor&,
                                 const StreamStrategy&, Wrap);
template void stream_pull<double>(std::span<const double>, std::span<double>,
                                  const DomainDims&, Layout,
                                  const LatticeDescriptor&,
                                  const StreamStrategy&, Wrap);
template void stream_push<float>(std::span<const float>, std::span<float>,
                                 const DomainDims&, Layout,
                                 const LatticeDescriptor&,
                                 const StreamStrategy&, Wrap);
template void stream_push<double>(std::span<const double>, std::span<double>,
                                  const DomainDims&, Layout,
                                  const LatticeDescriptor&,
                                  const StreamStrategy&, Wrap);
template void fill_unknowns_by_reflection<float>(std::span<const float>,
                                                 std::span<float>,
                                                 const DomainDims&, Layout,
                                                 const LatticeDescriptor&);
template void fill_unknowns_by_reflection<double>(std::span<const double>,
                                                  std::span<double>,
                                                  const DomainDims&, Layout,
                                                  const LatticeDescriptor&);

}  // namespace lbm
