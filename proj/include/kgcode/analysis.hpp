#ifndef KGCODE_ANALYSIS_HPP
#define KGCODE_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/clopen.hpp"
#include "kgcode/dyadic.hpp"
#include "kgcode/schedule.hpp"

namespace kgcode {

/// Lexicographically least P-extendible string of the given length.
BitString leftmost_extendible(const ClopenClass& p, unsigned length);

struct LeftSet {
  BitString leftmost;
  ClopenClass set;  // strings of the length up to and including `leftmost`
  Dyadic mass;      // μ(P ∩ U)
  Dyadic bound;     // 2^-length
  bool within = false;  // mass <= bound
  bool strict = false;  // mass < bound
};

LeftSet left_sets(const ClopenClass& p, unsigned length);

/// The leftmost extendible string of each stage; it moves right as the
/// stages shrink.
std::vector<BitString> staged_leftmost(const ApproxSequence& p,
                                       unsigned length);

struct VtLevel {
  std::size_t t = 0;
  unsigned length = 0;  // n_t
  ClopenClass v;
  Dyadic measure;
  Dyadic step_bound;     // (1 - 2^(-g(t-1)-1)) * measure(V_{t-1})
  Dyadic product_bound;  // Π_{i<t} (1 - 2^(-g(i)-1))
  bool step_ok = true;
  bool product_ok = true;
  bool nested = true;  // V_t ⊆ V_{t-1}
};

struct VtWitness {
  std::size_t t = 0;
  BitString prefix;  // the leftmost path restricted to n_t
  Dyadic density;
  Dyadic bound;  // 2^-g(t)
  bool within = false;
};

struct VtRun {
  std::vector<VtLevel> levels;
  BitString leftmost_path;  // at the class depth
  std::size_t last_inside = 0;  // largest t with the path inside V_t
  std::optional<VtWitness> witness;
};

/// Builds V_0 .. V_{t_max} from the left sets of the staged class:
/// V_0 is every string of length n_0, and V_{t+1} ∩ [σ] is the longest
/// initial segment of the enumeration of U_{n_{t+1}} ∩ [σ] whose measure
/// stays within 2^-|σ| (1 - 2^(-g(t)-1)). The enumeration lists strings by
/// the stage they enter U, then lexicographically. Requires
/// n_{t+1} > n_t + g(t) and n_{t_max} <= depth.
VtRun vt_construction(const ApproxSequence& p, std::span<const unsigned> g,
                      std::span<const unsigned> n, std::size_t t_max);

/// t,length,measure,product_bound,ok,path_inside,witness_density
std::string vt_csv(const VtRun& run);

struct DensityRow {
  std::size_t level = 0;
  unsigned length = 0;
  std::optional<Dyadic> min_density;  // none when nothing is extendible
  BitString argmin;
  Dyadic threshold;  // 2^-g(level)
  bool pass = true;
};

/// Minimum P-density over the extendible strings of each length L_i.
/// Requires L_{t+1} > L_t + g(t).
std::vector<DensityRow> density_threshold_experiment(
    const ClopenClass& p, std::span<const unsigned> g,
    std::span<const unsigned> lengths);
/// With L_i = L(i) and g(i) = l_i - m_i for i < levels.
std::vector<DensityRow> density_threshold_experiment(const ClopenClass& p,
                                                     const Schedule& sched,
                                                     std::size_t levels);
/// level,min_density,threshold,pass
std::string density_csv(const std::vector<DensityRow>& rows);

/// Removes random cylinders with lengths in [min_length, depth], skipping
/// any removal that would bring the measure to `floor` or below.
ClopenClass random_class(std::mt19937_64& rng, unsigned depth,
                         std::size_t removals, unsigned min_length,
                         const Dyadic& floor = Dyadic{});

/// A shrinking sequence: each stage removes `per_stage` random cylinders
/// from the previous one, never emptying it. With `cut_leftmost`, half of
/// the removals cut the current leftmost path instead.
ApproxSequence random_approximation(std::mt19937_64& rng, unsigned depth,
                                    std::size_t stages, std::size_t per_stage,
                                    unsigned min_length,
                                    bool cut_leftmost = false);

}  // namespace kgcode

#endif  // KGCODE_ANALYSIS_HPP
