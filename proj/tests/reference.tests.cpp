#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "cfwave/reference.hpp"

using namespace cfwave::reference;

namespace {

// Locate the column for (l, spin, solver, h); h = 0 means "any".
int find_col(const Table& t, int l, int spin, const char* solver,
             double h = 0) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const Column& col = t.columns[c];
    if (col.l == l && col.spin == spin &&
        std::strcmp(col.solver, solver) == 0 &&
        (h == 0 || col.h == h))
      return static_cast<int>(c);
  }
  FAIL("no such column");
  return -1;
}

int find_row(const Table& t, double k) {
  for (std::size_t r = 0; r < t.k.size(); ++r)
    if (t.k[r] == k) return static_cast<int>(r);
  FAIL("no such row");
  return -1;
}

double cell(const Table& t, double k, int l, int spin, const char* solver,
            double h = 0) {
  return t.value[find_row(t, k)][find_col(t, l, spin, solver, h)];
}

}  // namespace

TEST_CASE("bundled tables carry the published layout") {
  const Table& t1 = table(1);
  CHECK(t1.k.size() == 15);
  CHECK(t1.columns.size() == 8);
  CHECK(t1.k.front() == 0.1);
  CHECK(t1.k.back() == 1.5);
  for (const Column& c : t1.columns) CHECK(c.l == 0);

  const Table& t2 = table(2);
  CHECK(t2.k.size() == 10);
  CHECK(t2.k.back() == 1.0);
  for (const Column& c : t2.columns) CHECK(c.l == 1);
  // Per spin: three step variants of the mesh code, then the canonical code.
  CHECK(t2.columns[0].h == 0.004);
  CHECK(t2.columns[1].h == 0.006);
  CHECK(t2.columns[2].h == 0.008);
  CHECK(std::strcmp(t2.columns[3].solver, "kftee") == 0);
  CHECK(t2.columns[0].spin == 0);
  CHECK(t2.columns[4].spin == 1);

  for (int id : {3, 4}) {
    const Table& t = table(id);
    CHECK(t.k.size() == 10);
    CHECK(t.columns.size() == 8);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      CHECK(t.columns[c].l == 2 + static_cast<int>(c) / 2);
      CHECK(t.columns[c].spin == (id == 3 ? 0 : 1));
    }
  }

  CHECK_THROWS_AS(table(0), std::out_of_range);
  CHECK_THROWS_AS(table(5), std::out_of_range);
}

TEST_CASE("anchor cells match the published digits") {
  const Table& t1 = table(1);
  CHECK(cell(t1, 0.2, 0, 0, "kftee") == 2.034071);
  CHECK(cell(t1, 0.5, 0, 0, "kftee") == 1.168257);
  CHECK(cell(t1, 1.0, 0, 1, "kftee") == 1.507213);
  CHECK(cell(t1, 0.1, 0, 0, "mcdmm", 0.004) == 1.138750);
  CHECK(cell(t1, 0.1, 0, 0, "mcdmm", 0.008) == 1.171174);

  CHECK(cell(table(2), 0.5, 1, 1, "kftee") == 0.311150);
  CHECK(cell(table(3), 0.5, 3, 0, "kftee") == 0.010806);
  CHECK(cell(table(4), 1.0, 2, 1, "kftee") == 0.127824);
  CHECK(cell(table(3), 0.1, 2, 0, "mcdmm") == 0.001287);
}

TEST_CASE("only the four flagged high-l cells are unstable") {
  for (int id : {1, 2}) {
    for (const auto& row : table(id).value)
      for (double v : row) CHECK(!unstable_cell(v));
  }
  for (int id : {3, 4}) {
    const Table& t = table(id);
    int bad = 0;
    for (const auto& row : t.value)
      for (double v : row) bad += unstable_cell(v);
    CHECK(bad == 2);
    CHECK(unstable_cell(cell(t, 0.1, 4, t.columns[0].spin, "mcdmm")));
    CHECK(unstable_cell(cell(t, 0.1, 5, t.columns[0].spin, "mcdmm")));
    CHECK(!unstable_cell(cell(t, 0.1, 4, t.columns[0].spin, "kftee")));
    CHECK(!unstable_cell(cell(t, 0.2, 4, t.columns[0].spin, "mcdmm")));
  }
}
