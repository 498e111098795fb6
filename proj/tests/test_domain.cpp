#include <doctest.h>

#include "latticebolt/descriptor.hpp"
#include "latticebolt/domain.hpp"

using namespace lbm;

TEST_CASE("cell indexing is z-major") {
  DomainDims d{4, 5, 6};
  CHECK(d.cells() == 120);
  CHECK(cell_index(0, 0, 0, d) == 0);
  CHECK(cell_index(1, 0, 0, d) == 1);  // x is the fastest axis
  CHECK(cell_index(0, 1, 0, d) == 4);
  CHECK(cell_index(0, 0, 1, d) == 20);
  CHECK(cell_index(1, 2, 3, d) == (3 * 5 + 2) * 4 + 1);
  CHECK(cell_index(3, 4, 5, d) == 119);
}

TEST_CASE("contains") {
  DomainDims d{3, 4, 5};
  CHECK(d.contains(0, 0, 0));
  CHECK(d.contains(2, 3, 4));
  CHECK_FALSE(d.contains(-1, 0, 0));
  CHECK_FALSE(d.contains(3, 0, 0));
  CHECK_FALSE(d.contains(0, 4, 0));
  CHECK_FALSE(d.contains(0, 0, 5));
}

TEST_CASE("flatten round trip in both layouts") {
  DomainDims d{3, 4, 5};
  for (Layout layout : {Layout::SoA, Layout::AoS}) {
    for (int i = 0; i < kQ; ++i)
      for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
          for (int x = 0; x < d.nx; ++x) {
            std::size_t off = flatten_index(i, x, y, z, d, layout);
            CHECK(off < kQ * d.cells());
            DirCell back = unflatten_index(off, d, layout);
            CHECK(back.i == i);
            CHECK(back.x == x);
            CHECK(back.y == y);
            CHECK(back.z == z);
          }
  }
  // the two layouts place the same slot differently
  CHECK(flatten_index(2, 1, 0, 0, d, Layout::SoA) == 2 * 60 + 1);
  CHECK(flatten_index(2, 1, 0, 0, d, Layout::AoS) == 1 * 19 + 2);
}

TEST_CASE("cavity classification") {
  DomainDims d{5, 5, 5};
  auto cls = make_cavity_classification(d, 0.1);

  // lid face interior moves, everything else on the hull bounces back
  CHECK(cls.count(CellFlag::MovingWall) == 9);
  CHECK(cls.count(CellFlag::SolidWall) == 98 - 9);
  CHECK(cls.count(CellFlag::Fluid) == 27);

  CHECK(cls.flag(2, 2, 2) == CellFlag::Fluid);
  CHECK(cls.flag(0, 2, 2) == CellFlag::SolidWall);
  CHECK(cls.flag(2, 2, 0) == CellFlag::SolidWall);
  CHECK(cls.flag(2, 2, 4) == CellFlag::MovingWall);
  // lid cells that also touch a side wall stay plain bounce-back
  CHECK(cls.flag(0, 2, 4) == CellFlag::SolidWall);
  CHECK(cls.flag(2, 0, 4) == CellFlag::SolidWall);
  CHECK(cls.flag(0, 0, 4) == CellFlag::SolidWall);

  auto u = cls.wall_velocity(cell_index(2, 2, 4, d));
  CHECK(u[0] == 0.1);
  CHECK(u[1] == 0.0);
  CHECK(u[2] == 0.0);
}

TEST_CASE("cavity classification with a resting lid") {
  DomainDims d{4, 4, 4};
  auto cls = make_cavity_classification(d, 0.0);
  CHECK(cls.count(CellFlag::MovingWall) == 0);
  CHECK(cls.count(CellFlag::SolidWall) == 64 - 8);
}

TEST_CASE("unknown direction mask") {
  DomainDims d{4, 4, 4};
  const auto& desc = d3q19();

  CHECK(unknown_direction_mask(1, 1, 1, d, desc) == 0);
  CHECK(unknown_direction_mask(2, 2, 2, d, desc) == 0);

  // bit i is set exactly when the upstream neighbor x - e_i is outside
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        std::uint32_t mask = unknown_direction_mask(x, y, z, d, desc);
        for (int i = 0; i < kQ; ++i) {
          const auto& e = desc.velocities[i];
          bool outside = !d.contains(x - e[0], y - e[1], z - e[2]);
          CHECK(((mask >> i) & 1u) == (outside ? 1u : 0u));
        }
      }

  // rest population is never reconstructed
  for (int x = 0; x < d.nx; ++x)
    CHECK((unknown_direction_mask(x, 0, 0, d, desc) & 1u) == 0);
}
