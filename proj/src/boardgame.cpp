#include "gph/boardgame.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gph {
namespace {

// The exchange recipe shared by apply_move and invert_move. Precondition
// checking is the caller's job.
TaggedConfiguration exchange_at(const TaggedConfiguration& config, std::size_t j) {
  const auto& pseq = config.map.pseq;
  const std::size_t n = pseq.n();
  TaggedConfiguration out = config;
  std::swap(out.map.rows[j - 1], out.map.rows[j]);
  const int r0 = std::min(pseq.p[j - 1], pseq.p[j]);
  const int lo = static_cast<int>(pseq.k) + pseq.Q[j - 1];  // k + Q_{j-1}
  const int hi = static_cast<int>(pseq.k) + pseq.Q[j];      // k + Q_j
  for (std::size_t c = j + 1; c < n; ++c) {  // columns right of j+1 (0-based c)
    int& r = out.map.rows[c];
    for (int e = 1; e <= r0; ++e) {
      if (r == lo + e) {
        r = hi + e;
        break;
      }
      if (r == hi + e) {
        r = lo + e;
        break;
      }
    }
  }
  // Swap the time variables of column labels j and j+1 wherever they sit.
  for (auto& label : out.sigma) {
    if (label == static_cast<int>(j)) label = static_cast<int>(j) + 1;
    else if (label == static_cast<int>(j) + 1) label = static_cast<int>(j);
  }
  return out;
}

}  // namespace

int PSequence::p0() const {
  int m = 0;
  for (int v : p) m = std::max(m, v);
  return m;
}

PSequence make_psequence(std::size_t k, std::vector<int> p) {
  if (k < 1) throw std::invalid_argument("PSequence: k must be >= 1");
  if (p.empty()) throw std::invalid_argument("PSequence: need at least one column");
  for (int v : p)
    if (v < 1) throw std::invalid_argument("PSequence: entries must be >= 1");
  PSequence s;
  s.k = k;
  s.p = std::move(p);
  s.Q.assign(s.p.size() + 1, 0);
  for (std::size_t j = 0; j < s.p.size(); ++j) s.Q[j + 1] = s.Q[j] + s.p[j];
  return s;
}

CollapsingMap make_map(PSequence pseq, std::vector<int> rows) {
  if (rows.size() != pseq.n())
    throw std::invalid_argument("CollapsingMap: one highlight row per column");
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (rows[j] < 1 || rows[j] > static_cast<int>(pseq.k) + pseq.Q[j])
      throw std::invalid_argument("CollapsingMap: row out of range (need 1 <= r_j <= k+Q_{j-1})");
  return {std::move(pseq), std::move(rows)};
}

TaggedConfiguration tag_identity(CollapsingMap map) {
  std::vector<int> sigma(map.pseq.n());
  for (std::size_t m = 0; m < sigma.size(); ++m) sigma[m] = static_cast<int>(m) + 1;
  return {std::move(map), std::move(sigma)};
}

bool operator==(const CollapsingMap& a, const CollapsingMap& b) {
  return a.pseq.k == b.pseq.k && a.pseq.p == b.pseq.p && a.rows == b.rows;
}

bool operator==(const TaggedConfiguration& a, const TaggedConfiguration& b) {
  return a.map == b.map && a.sigma == b.sigma;
}

unsigned long long map_count(const PSequence& pseq) {
  unsigned long long count = 1;
  for (std::size_t j = 0; j < pseq.n(); ++j)
    count *= pseq.k + static_cast<unsigned long long>(pseq.Q[j]);
  return count;
}

std::vector<CollapsingMap> enumerate_maps(const PSequence& pseq,
                                          unsigned long long cap) {
  const unsigned long long count = map_count(pseq);
  if (count > cap) throw std::runtime_error("enumerate_maps: enumeration cap exceeded");
  const std::size_t n = pseq.n();
  std::vector<CollapsingMap> maps;
  maps.reserve(count);
  std::vector<int> rows(n, 1);
  while (true) {
    maps.push_back({pseq, rows});
    std::size_t j = n;
    while (j-- > 0) {
      if (rows[j] < static_cast<int>(pseq.k) + pseq.Q[j]) {
        ++rows[j];
        for (std::size_t q = j + 1; q < n; ++q) rows[q] = 1;
        break;
      }
      if (j == 0) return maps;
    }
  }
}

bool movable(const TaggedConfiguration& config, std::size_t j) {
  const std::size_t n = config.map.pseq.n();
  if (j < 1 || j >= n) return false;
  return config.map.rows[j] < config.map.rows[j - 1];
}

TaggedConfiguration apply_move(const TaggedConfiguration& config, std::size_t j) {
  if (!movable(config, j))
    throw std::invalid_argument("apply_move: move is not acceptable at this position");
  return exchange_at(config, j);
}

TaggedConfiguration invert_move(const TaggedConfiguration& config, std::size_t j) {
  const std::size_t n = config.map.pseq.n();
  if (j < 1 || j >= n || config.map.rows[j - 1] >= config.map.rows[j])
    throw std::invalid_argument("invert_move: rows are not in post-move order");
  return exchange_at(config, j);
}

bool is_special_echelon(const CollapsingMap& map) {
  for (std::size_t c = 1; c < map.rows.size(); ++c)
    if (map.rows[c] < map.rows[c - 1]) return false;
  return true;
}

Reduction reduce_to_echelon(const CollapsingMap& map) {
  Reduction red{tag_identity(map), 0};
  const std::size_t n = map.pseq.n();
  // Each move lowers the row vector lexicographically at the move position
  // (earlier columns are untouched), so the loop terminates; the budget only
  // guards against implementation bugs.
  const std::size_t budget = 16 + 8 * n * n;
  while (true) {
    std::size_t j = 0;
    for (std::size_t c = 1; c < n; ++c)
      if (movable(red.config, c)) {
        j = c;
        break;
      }
    if (j == 0) break;
    red.config = apply_move(red.config, j);
    if (++red.moves > budget)
      throw std::runtime_error("reduce_to_echelon: move budget exceeded");
  }
  return red;
}

std::vector<EchelonClass> classify_all(const PSequence& pseq,
                                       unsigned long long cap) {
  std::map<std::vector<int>, EchelonClass> by_rep;
  for (const auto& map : enumerate_maps(pseq, cap)) {
    Reduction red = reduce_to_echelon(map);
    auto& cls = by_rep[red.config.map.rows];
    if (cls.members.empty()) cls.representative = red.config.map;
    cls.members.push_back({map, red.config.sigma});
  }
  std::vector<EchelonClass> out;
  out.reserve(by_rep.size());
  for (auto& [rows, cls] : by_rep) out.push_back(std::move(cls));
  return out;
}

CountBoundRecord count_bound_check(const PSequence& pseq,
                                   unsigned long long cap) {
  CountBoundRecord rec;
  rec.maps = map_count(pseq);
  const auto classes = classify_all(pseq, cap);
  rec.classes = classes.size();
  const auto n = pseq.n();
  rec.bound = 1ull << (pseq.k + static_cast<std::size_t>(pseq.p0() + 1) * (n - 1));
  std::size_t covered = 0;
  rec.sigmas_distinct = true;
  for (const auto& cls : classes) {
    rec.largest_class = std::max(rec.largest_class, cls.members.size());
    covered += cls.members.size();
    std::vector<std::vector<int>> sigmas;
    for (const auto& m : cls.members) sigmas.push_back(m.sigma);
    std::sort(sigmas.begin(), sigmas.end());
    if (std::adjacent_find(sigmas.begin(), sigmas.end()) != sigmas.end())
      rec.sigmas_distinct = false;
  }
  rec.partition_ok = (covered == rec.maps);
  rec.bound_ok = (rec.classes <= rec.bound);
  for (const auto& map : enumerate_maps(pseq, cap))
    rec.max_moves = std::max(rec.max_moves, reduce_to_echelon(map).moves);
  return rec;
}

double class_domain_volume(const EchelonClass& cls, double t) {
  std::vector<std::vector<int>> sigmas;
  for (const auto& m : cls.members) sigmas.push_back(m.sigma);
  std::sort(sigmas.begin(), sigmas.end());
  if (std::adjacent_find(sigmas.begin(), sigmas.end()) != sigmas.end())
    throw std::runtime_error("class_domain_volume: duplicate sigma in class");
  const std::size_t n = cls.representative.pseq.n();
  double volume = std::pow(t, static_cast<double>(n));
  for (std::size_t i = 2; i <= n; ++i) volume /= static_cast<double>(i);
  return volume * static_cast<double>(cls.members.size());
}

std::string render(const TaggedConfiguration& config) {
  const auto& pseq = config.map.pseq;
  const std::size_t n = pseq.n();
  const int total_rows = static_cast<int>(pseq.k) + pseq.Q[n - 1];
  std::ostringstream os;
  // header: time label positions, sigma^{-1}(label) over each column
  os << "t:    ";
  for (std::size_t c = 0; c < n; ++c) {
    int pos = 0;
    for (std::size_t m = 0; m < n; ++m)
      if (config.sigma[m] == static_cast<int>(c) + 1) pos = static_cast<int>(m) + 1;
    os << " t(s^-1=" << pos << ")";
  }
  os << '\n';
  for (int r = 1; r <= total_rows; ++r) {
    os << "row " << r << ":";
    for (std::size_t c = 0; c < n; ++c) {
      const int limit = static_cast<int>(pseq.k) + pseq.Q[c];
      std::ostringstream cell;
      if (r > limit) {
        cell << "0";
      } else {
        cell << "B_" << r << ";" << (static_cast<int>(pseq.k) + pseq.Q[c] + 1) << ".."
             << (static_cast<int>(pseq.k) + pseq.Q[c + 1]);
      }
      const bool hl = (r <= limit) && (config.map.rows[c] == r);
      os << (hl ? " [" : "  ") << cell.str() << (hl ? "]" : " ");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace gph
