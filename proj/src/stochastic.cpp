#include "layered/stochastic.hpp"

#include <cmath>
#include <stdexcept>

namespace layered {

void HillclimbConfig::validate() const {
    if (!(alpha0 > 0.0)) throw std::invalid_argument("alpha0 must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
    if (!(alpha_min > 0.0 && alpha_min <= alpha0)) throw std::invalid_argument("alpha_min must lie in (0, alpha0]");
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (recovery) recovery->validate();
}

namespace {

TrialMove random_move(Rng& rng, const PointSet& X) {
    TrialMove move{static_cast<std::size_t>(rng.index(X.size())), std::vector<double>(X.dim())};
    double norm = 0.0;
    while (norm == 0.0) {
        norm = 0.0;
        for (double& v : move.direction) {
            v = rng.normal();
            norm += v * v;
        }
        norm = std::sqrt(norm);
    }
    for (double& v : move.direction) v /= norm;
    return move;
}

TraceRecord record(std::size_t iteration, const PointSet& X, const PointSet& Y, const LayeredBreakdown& b,
                   bool mapped, StepKind kind) {
    TraceRecord r;
    r.iteration = iteration;
    r.value = b.value;
    r.layer_sizes = b.partition.sizes();
    r.points = X;
    if (mapped) r.objective_points = Y;
    r.kind = kind;
    return r;
}

}  // namespace

HillclimbResult hillclimb(const PointSet& X0, const FeasibleRegion& region, const Surrogate& surrogate,
                          const HillclimbConfig& cfg, const TrialProposal& proposal) {
    region.validate();
    surrogate.config.validate();
    cfg.validate();
    if (X0.empty() || X0.dim() != region.dim) throw std::invalid_argument("hillclimb: bad initial set");

    Rng rng(cfg.seed);
    Rng recovery_rng = rng.split(1);
    const bool mapped = !surrogate.map.is_identity();

    HillclimbResult out;
    auto& result = out.run;
    PointSet X = project(X0, region);
    PointSet Y = surrogate.objectives(X);
    auto current = layered_breakdown(Y, surrogate.config);
    result.trace.push_back(record(0, X, Y, current, mapped, StepKind::Initial));
    double alpha = cfg.alpha0;
    std::vector<double> history{current.value};
    std::size_t quiet_since = 0;

    for (std::size_t k = 0; k < cfg.k_max; ++k) {
        if (cfg.recovery) {
            const auto& rec = *cfg.recovery;
            if (k >= quiet_since + rec.window && k + rec.freeze_tail < cfg.k_max &&
                history[k] - history[k - rec.window] < rec.min_growth) {
                perturb_points(X, region, rec.perturb_count, rec.perturb_step, recovery_rng);
                Y = surrogate.objectives(X);
                current = layered_breakdown(Y, surrogate.config);
                alpha = cfg.alpha0;
                quiet_since = k + 1;
                ++result.perturbations;
                result.trace.push_back(record(k + 1, X, Y, current, mapped, StepKind::Perturbation));
                history.push_back(current.value);
                out.step_sizes.push_back(alpha);
                continue;
            }
        }

        bool accepted = false;
        double trial_alpha = alpha;
        for (std::size_t r = 0; r <= cfg.retries; ++r) {
            TrialMove move = proposal ? proposal(rng, X) : random_move(rng, X);
            if (move.index >= X.size() || move.direction.size() != X.dim())
                throw std::invalid_argument("hillclimb: malformed trial move");
            PointSet trial = X;
            auto row = trial[move.index];
            for (std::size_t c = 0; c < row.size(); ++c) row[c] += trial_alpha * move.direction[c];
            region.project_point(row);
            PointSet trial_y = surrogate.objectives(trial);
            auto b = layered_breakdown(trial_y, surrogate.config);
            if (b.value >= current.value) {
                X = std::move(trial);
                Y = std::move(trial_y);
                current = std::move(b);
                alpha = trial_alpha;
                accepted = true;
                break;
            }
            trial_alpha = std::max(cfg.rho * trial_alpha, cfg.alpha_min);
        }
        if (accepted) ++result.accepted;
        result.trace.push_back(record(k + 1, X, Y, current, mapped, accepted ? StepKind::Accepted : StepKind::Rejected));
        history.push_back(current.value);
        out.step_sizes.push_back(alpha);
        result.iterations = k + 1;
    }
    result.iterations = cfg.k_max;
    result.final_state = X;
    result.final_objectives = Y;
    return out;
}

}  // namespace layered
