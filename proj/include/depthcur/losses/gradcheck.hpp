#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace depthcur {

using ScalarFunction = std::function<double(std::span<const double>)>;

struct GradcheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    std::size_t probed = 0;
};

/// Central differences per coordinate against `analytic`. Reports
/// max |analytic - numeric| / max(|numeric|, 1e-8). When `probe` is
/// non-empty only coordinates with probe[i] != 0 are checked.
GradcheckReport gradcheck(const ScalarFunction& f, std::span<const double> x,
                          std::span<const double> analytic, double step = 1e-4,
                          std::span<const std::uint8_t> probe = {});

enum class GradOp { Ssi, Gm, Cosine, Aesthetic };

std::string_view to_string(GradOp op);
GradOp grad_op_from_string(std::string_view name);  // throws ArgumentError

/// Acceptance tolerance for each op: 1e-4 for the disparity losses, 1e-5 for
/// cosine and aesthetic.
double gradcheck_tolerance(GradOp op);

/// Runs gradcheck on `probes` random instances of `op` drawn from `seed`.
/// Instances are resampled until no kink (trim boundary, |x| or ReLU) lies
/// within reach of the probe step. Returns the worst error over all probes.
GradcheckReport gradcheck_random_probes(GradOp op, std::uint64_t seed, int probes = 20,
                                        double step = 1e-4);

}  // namespace depthcur
