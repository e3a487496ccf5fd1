#include "cechlab/persistence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cechlab/errors.hpp"
#include "cechlab/miniball.hpp"

namespace cechlab {

namespace {

struct Entry {
  std::uint32_t row;
  std::uint32_t coeff;
};

// target += factor * source, both sorted by row.
void add_scaled(std::vector<Entry>& target, const std::vector<Entry>& source, std::uint32_t factor,
                const FieldSpec& field, std::vector<Entry>& scratch) {
  scratch.clear();
  auto a = target.begin();
  auto b = source.begin();
  while (a != target.end() || b != source.end()) {
    if (b == source.end() || (a != target.end() && a->row < b->row)) {
      scratch.push_back(*a++);
    } else if (a == target.end() || b->row < a->row) {
      scratch.push_back({b->row, field.multiply(b->coeff, factor)});
      ++b;
    } else {
      const std::uint32_t c = field.add(a->coeff, field.multiply(b->coeff, factor));
      if (c) scratch.push_back({a->row, c});
      ++a;
      ++b;
    }
  }
  target.swap(scratch);
}

}  // namespace

std::size_t PersistenceDiagram::betti(std::size_t k, double r) const {
  std::size_t n = 0;
  for (const auto& iv : intervals)
    if (iv.dim == k && iv.birth <= r && r < iv.death) ++n;
  return n;
}

std::size_t PersistenceDiagram::persistent_betti(std::size_t k, double r, double s) const {
  std::size_t n = 0;
  for (const auto& iv : intervals)
    if (iv.dim == k && iv.birth <= r && iv.death > s) ++n;
  return n;
}

std::vector<PersistenceInterval> PersistenceDiagram::in_dimension(std::size_t k) const {
  std::vector<PersistenceInterval> out;
  for (const auto& iv : intervals)
    if (iv.dim == k) out.push_back(iv);
  return out;
}

PersistenceDiagram compute_persistence(const FilteredComplex& complex, FieldSpec field) {
  const std::size_t n = complex.size();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> pivot_slot(n, kNone);  // row -> reduced column slot
  std::vector<std::uint32_t> killer(n, kNone);      // positive simplex -> negative partner
  std::vector<char> negative(n, 0);
  std::vector<std::vector<Entry>> reduced;

  std::vector<Entry> column, scratch;
  std::vector<Vertex> facet;
  for (std::size_t q = complex.max_dim(); q >= 1; --q) {
    for (std::size_t j = 0; j < n; ++j) {
      if (complex.dim(j) != q || killer[j] != kNone) continue;  // clearing
      auto v = complex.vertices(j);
      column.clear();
      for (std::size_t skip = 0; skip <= q; ++skip) {
        facet.clear();
        for (std::size_t i = 0; i <= q; ++i)
          if (i != skip) facet.push_back(v[i]);
        auto f = complex.find(facet);
        if (!f || *f >= j) throw InternalError("filtration order violates face relation");
        column.push_back({static_cast<std::uint32_t>(*f), field.from_int(skip % 2 ? -1 : 1)});
      }
      std::sort(column.begin(), column.end(), [](Entry a, Entry b) { return a.row < b.row; });

      while (!column.empty()) {
        const std::uint32_t slot = pivot_slot[column.back().row];
        if (slot == kNone) break;
        const auto& other = reduced[slot];
        const std::uint32_t factor =
            field.negate(field.multiply(column.back().coeff, field.inverse(other.back().coeff)));
        add_scaled(column, other, factor, field, scratch);
      }
      if (!column.empty()) {
        const std::uint32_t low = column.back().row;
        pivot_slot[low] = static_cast<std::uint32_t>(reduced.size());
        reduced.push_back(column);
        killer[low] = static_cast<std::uint32_t>(j);
        negative[j] = 1;
      }
    }
  }

  PersistenceDiagram diagram;
  diagram.field = field;
  for (std::size_t i = 0; i < n; ++i) {
    if (negative[i]) continue;
    const double birth = complex.value(i);
    if (killer[i] == kNone) {
      diagram.intervals.push_back({complex.dim(i), birth, kInfinity});
    } else {
      const double death = complex.value(killer[i]);
      if (death > birth) diagram.intervals.push_back({complex.dim(i), birth, death});
    }
  }
  return diagram;
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "dim,birth,death\n" << std::setprecision(17);
  for (const auto& iv : diagram.intervals) {
    out << iv.dim << ',' << iv.birth << ',';
    if (std::isinf(iv.death))
      out << "inf";
    else
      out << iv.death;
    out << '\n';
  }
}

PersistenceDiagram read_diagram_csv(std::istream& in, FieldSpec field) {
  PersistenceDiagram diagram;
  diagram.field = field;
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim,birth,death", 0) != 0)
    throw ArgumentError("diagram CSV must start with header dim,birth,death");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string dim, birth, death;
    if (!std::getline(row, dim, ',') || !std::getline(row, birth, ',') || !std::getline(row, death))
      throw ArgumentError("malformed diagram row: " + line);
    PersistenceInterval iv{std::stoul(dim), std::stod(birth),
                           death == "inf" ? kInfinity : std::stod(death)};
    if (!(iv.birth <= iv.death)) throw ArgumentError("interval with birth > death: " + line);
    diagram.intervals.push_back(iv);
  }
  return diagram;
}

namespace {

std::size_t checked_dim(int k) {
  if (k < 0) throw ArgumentError("homology dimension must be >= 0");
  return static_cast<std::size_t>(k);
}

CechBuildOptions options_for(std::size_t max_dim) {
  CechBuildOptions o;
  o.force_dim = max_dim > kDefaultMaxDimCap;
  return o;
}

}  // namespace

std::size_t betti(const PointCloud& cloud, double r, int k, FieldSpec field) {
  const std::size_t kk = checked_dim(k);
  if (!(r >= 0.0) || std::isinf(r)) throw ArgumentError("radius must be finite and >= 0");
  const auto complex = detail::build_cech_filtration_closed(cloud, r, kk + 1, options_for(kk + 1));
  return compute_persistence(complex, field).betti(kk, r);
}

std::size_t persistent_betti(const PointCloud& cloud, double r, double theta, int k, FieldSpec field) {
  const std::size_t kk = checked_dim(k);
  if (!(theta >= 1.0) || std::isinf(theta)) throw ArgumentError("theta must be >= 1");
  if (!(r >= 0.0) || std::isinf(r)) throw ArgumentError("radius must be finite and >= 0");
  const double outer = theta * r;
  const auto complex = detail::build_cech_filtration_closed(cloud, outer, kk + 1, options_for(kk + 1));
  return compute_persistence(complex, field).persistent_betti(kk, r, outer);
}

namespace {

std::size_t rank_mod_p(std::vector<std::vector<std::uint32_t>> m, const FieldSpec& field) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    const std::uint32_t inv = field.inverse(m[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const std::uint32_t f = field.negate(field.multiply(m[r][c], inv));
      for (std::size_t cc = c; cc < cols; ++cc)
        m[r][cc] = field.add(m[r][cc], field.multiply(f, m[rank][cc]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t betti_oracle(const PointCloud& cloud, double r, int k, FieldSpec field) {
  const std::size_t kk = checked_dim(k);
  const std::size_t n = cloud.size();
  if (n > kOracleMaxPoints) throw ArgumentError("betti_oracle is limited to 16 points");
  if (!(r >= 0.0)) throw ArgumentError("radius must be >= 0");

  // All simplices (as vertex bitmasks) of Čech_r(P) with `size` vertices.
  MiniballSolver solver(cloud.dim());
  std::vector<Index> verts;
  auto simplices_of_size = [&](std::size_t size) {
    std::vector<std::uint32_t> out;
    if (size == 0 || size > n) return out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
      verts.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1u) verts.push_back(i);
      if (solver.radius(cloud, verts) <= r) out.push_back(mask);
    }
    return out;
  };
  // Dense boundary matrix: rows = faces (size s - 1), columns = simplices (size s).
  auto boundary = [&](const std::vector<std::uint32_t>& faces, const std::vector<std::uint32_t>& cells) {
    std::vector<std::vector<std::uint32_t>> m(faces.size(), std::vector<std::uint32_t>(cells.size(), 0));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      int position = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(cells[c] >> i & 1u)) continue;
        const std::uint32_t face = cells[c] & ~(1u << i);
        auto it = std::lower_bound(faces.begin(), faces.end(), face);
        if (it != faces.end() && *it == face)
          m[static_cast<std::size_t>(it - faces.begin())][c] = field.from_int(position % 2 ? -1 : 1);
        ++position;
      }
    }
    return m;
  };

  const auto lower = simplices_of_size(kk);      // (k-1)-simplices
  const auto cells = simplices_of_size(kk + 1);  // k-simplices
  const auto upper = simplices_of_size(kk + 2);  // (k+1)-simplices
  if (cells.empty()) return 0;
  const std::size_t rank_dk = kk == 0 ? 0 : rank_mod_p(boundary(lower, cells), field);
  const std::size_t rank_dk1 = upper.empty() ? 0 : rank_mod_p(boundary(cells, upper), field);
  return cells.size() - rank_dk - rank_dk1;
}

}  // namespace cechlab
