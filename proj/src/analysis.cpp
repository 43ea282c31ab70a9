#include "kgcode/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "kgcode/error.hpp"
#include "kgcode/random.hpp"

namespace kgcode {

namespace {

// The first `count` extensions of sigma of length |sigma| + bits, as
// cylinders.
void first_extensions(const BitString& sigma, unsigned bits,
                      std::uint64_t count, std::vector<BitString>& out) {
  if (count == 0) return;
  if (bits < 64 && count == (std::uint64_t{1} << bits)) {
    out.push_back(sigma);
    return;
  }
  std::uint64_t offset = 0;
  for (unsigned j = bits; j-- > 0;) {
    if (!((count >> j) & 1)) continue;
    out.push_back(sigma + BitString::from_index(offset >> j, bits - j));
    offset += std::uint64_t{1} << j;
  }
}

BitString random_bits(std::mt19937_64& rng, unsigned length) {
  BitString s;
  for (unsigned i = 0; i < length; ++i) s.push_back(rng() & 1);
  return s;
}

}  // namespace

BitString leftmost_extendible(const ClopenClass& p, unsigned length) {
  if (p.empty()) fail(ErrorKind::precondition, "empty class");
  return extendible_extensions(p, BitString{}, length, 1).front();
}

LeftSet left_sets(const ClopenClass& p, unsigned length) {
  LeftSet out;
  out.leftmost = leftmost_extendible(p, length);
  std::vector<BitString> gens{out.leftmost};
  for (unsigned k = 0; k < length; ++k)
    if (out.leftmost[k]) gens.push_back(out.leftmost.prefix(k) + BitString("0"));
  out.set = ClopenClass(length, gens);
  for (const auto& u : out.set.generators())
    out.mass += density(p, u).scaled(-static_cast<long>(u.size()));
  out.bound = Dyadic::pow2(-static_cast<long>(length));
  out.within = out.mass <= out.bound;
  out.strict = out.mass < out.bound;
  return out;
}

std::vector<BitString> staged_leftmost(const ApproxSequence& p,
                                       unsigned length) {
  std::vector<BitString> out;
  for (std::size_t s = 0; s < p.size(); ++s)
    out.push_back(leftmost_extendible(p[s], length));
  return out;
}

VtRun vt_construction(const ApproxSequence& p, std::span<const unsigned> g,
                      std::span<const unsigned> n, std::size_t t_max) {
  if (n.size() < t_max + 1 || g.size() < t_max)
    fail(ErrorKind::precondition, "need n_0..n_tmax and g(0)..g(tmax-1)");
  for (std::size_t t = 0; t < t_max; ++t)
    if (n[t + 1] <= n[t] + g[t])
      fail(ErrorKind::precondition,
           "level lengths must satisfy n_{t+1} > n_t + g(t); fails at t = " +
               std::to_string(t));
  if (n[t_max] > p.depth())
    fail(ErrorKind::precondition, "class depth below n_" + std::to_string(t_max));
  const ClopenClass& last = p.final_stage();

  VtRun run;
  Dyadic product(1);
  VtLevel v0;
  v0.length = n[0];
  v0.v = ClopenClass::full(n[0]);
  v0.measure = Dyadic(1);
  v0.step_bound = Dyadic(1);
  v0.product_bound = product;
  run.levels.push_back(std::move(v0));

  for (std::size_t t = 0; t < t_max; ++t) {
    const unsigned len = n[t];
    const unsigned next = n[t + 1];
    const unsigned bits = next - len;
    if (bits >= 63)
      fail(ErrorKind::precondition, "level gap too large for enumeration");
    // U_next only grows as the leftmost string moves right, so ordering by
    // stage of entry and then lexicographically is plain lexicographic
    // order, and U_next ∩ [σ] is an initial segment of [σ].
    const auto leftmost = staged_leftmost(p, next);
    const BitString& star = leftmost.back();
    const BitString star_head = star.prefix(len);
    const std::uint64_t cap = (std::uint64_t{1} << bits) -
                              (std::uint64_t{1} << (bits - g[t] - 1));

    std::vector<BitString> gens;
    for (const auto& sigma : run.levels.back().v.members()) {
      std::uint64_t count = 0;
      if (sigma < star_head)
        count = std::uint64_t{1} << bits;
      else if (sigma == star_head)
        count = star.suffix_from(len).to_index() + 1;
      first_extensions(sigma, bits, std::min(count, cap), gens);
    }
    const Dyadic factor = Dyadic(1) - Dyadic::pow2(-static_cast<long>(g[t]) - 1);

    VtLevel lv;
    lv.t = t + 1;
    lv.length = next;
    lv.v = ClopenClass(next, std::move(gens));
    lv.measure = measure(lv.v);
    lv.step_bound = factor * run.levels.back().measure;
    product *= factor;
    lv.product_bound = product;
    lv.step_ok = lv.measure <= lv.step_bound;
    lv.product_ok = lv.measure <= lv.product_bound;
    const ClopenClass& prev = run.levels.back().v;
    for (const auto& gen : lv.v.generators())
      lv.nested = lv.nested && prev.covers(gen.prefix(std::min<std::size_t>(
                                   gen.size(), len)));
    run.levels.push_back(std::move(lv));
  }

  run.leftmost_path = leftmost_extendible(last, last.depth());
  while (run.last_inside < t_max &&
         run.levels[run.last_inside + 1].v.contains(
             run.leftmost_path.prefix(n[run.last_inside + 1])))
    ++run.last_inside;
  if (run.last_inside < t_max) {
    VtWitness w;
    w.t = run.last_inside;
    w.prefix = run.leftmost_path.prefix(n[w.t]);
    w.density = density(last, w.prefix);
    w.bound = Dyadic::pow2(-static_cast<long>(g[w.t]));
    w.within = w.density <= w.bound;
    run.witness = std::move(w);
  }
  return run;
}

std::string vt_csv(const VtRun& run) {
  std::ostringstream out;
  out << "t,length,measure,product_bound,ok,path_inside,witness_density\n";
  for (const auto& lv : run.levels) {
    out << lv.t << ',' << lv.length << ',' << lv.measure.str() << ','
        << lv.product_bound.str() << ','
        << (lv.step_ok && lv.product_ok && lv.nested ? "pass" : "fail") << ','
        << (lv.t <= run.last_inside ? 1 : 0) << ',';
    if (run.witness && run.witness->t == lv.t) out << run.witness->density.str();
    out << '\n';
  }
  return out.str();
}

std::vector<DensityRow> density_threshold_experiment(
    const ClopenClass& p, std::span<const unsigned> g,
    std::span<const unsigned> lengths) {
  if (g.size() < lengths.size())
    fail(ErrorKind::precondition, "need g(i) for every level");
  for (std::size_t t = 0; t + 1 < lengths.size(); ++t)
    if (lengths[t + 1] <= lengths[t] + g[t])
      fail(ErrorKind::precondition,
           "level lengths must satisfy L_{t+1} > L_t + g(t); fails at t = " +
               std::to_string(t));
  std::vector<DensityRow> rows;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    DensityRow row;
    row.level = i;
    row.length = lengths[i];
    row.threshold = Dyadic::pow2(-static_cast<long>(g[i]));
    if (!p.empty())
      for (const auto& sigma :
           extendible_extensions(p, BitString{}, lengths[i])) {
        Dyadic d = density(p, sigma);
        if (!row.min_density || d < *row.min_density) {
          row.min_density = std::move(d);
          row.argmin = sigma;
        }
      }
    row.pass = !row.min_density || *row.min_density >= row.threshold;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DensityRow> density_threshold_experiment(const ClopenClass& p,
                                                     const Schedule& sched,
                                                     std::size_t levels) {
  std::vector<unsigned> g, lengths;
  for (std::size_t i = 0; i < levels; ++i) {
    g.push_back(sched.g(i));
    lengths.push_back(static_cast<unsigned>(sched.L(i)));
  }
  return density_threshold_experiment(p, g, lengths);
}

std::string density_csv(const std::vector<DensityRow>& rows) {
  std::string s = "level,min_density,threshold,pass\n";
  for (const auto& r : rows)
    s += std::to_string(r.level) + ',' +
         (r.min_density ? r.min_density->str() : std::string("none")) + ',' +
         r.threshold.str() + ',' + (r.pass ? "pass" : "fail") + '\n';
  return s;
}

ClopenClass random_class(std::mt19937_64& rng, unsigned depth,
                         std::size_t removals, unsigned min_length,
                         const Dyadic& floor) {
  if (min_length > depth)
    fail(ErrorKind::precondition, "cylinder length exceeds class depth");
  ClopenClass c = ClopenClass::full(depth);
  for (std::size_t r = 0; r < removals; ++r) {
    const unsigned len = static_cast<unsigned>(between(rng, min_length, depth));
    ClopenClass next =
        difference(c, ClopenClass(depth, {random_bits(rng, len)}));
    if (!next.empty() && measure(next) > floor) c = std::move(next);
  }
  return c;
}

ApproxSequence random_approximation(std::mt19937_64& rng, unsigned depth,
                                    std::size_t stages, std::size_t per_stage,
                                    unsigned min_length, bool cut_leftmost) {
  if (stages == 0) fail(ErrorKind::precondition, "need at least one stage");
  std::vector<ClopenClass> out;
  ClopenClass c = ClopenClass::full(depth);
  for (std::size_t s = 0; s < stages; ++s) {
    for (std::size_t r = 0; r < per_stage; ++r) {
      const unsigned len =
          static_cast<unsigned>(between(rng, min_length, depth));
      BitString cut = random_bits(rng, len);
      if (cut_leftmost && below(rng, 2) == 0)
        cut = leftmost_extendible(c, len);
      ClopenClass next = difference(c, ClopenClass(depth, {cut}));
      if (!next.empty()) c = std::move(next);
    }
    out.push_back(c);
  }
  return ApproxSequence(std::move(out));
}

}  // namespace kgcode
