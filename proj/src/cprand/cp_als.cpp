#include <chrono>

#include "kfjlt/cp.hpp"
#include "kfjlt/sketch_ls.hpp"

namespace kfjlt {

AlsSweepResult cp_als_sweep(const DenseTensor& t, CpModel model, bool track_objective) {
  if (!(t.shape() == model.shape())) {
    throw std::domain_error("cp_als_sweep: tensor and model shapes differ");
  }
  AlsSweepResult out{std::move(model), {}, false};
  for (std::size_t k = 0; k < t.shape().degree(); ++k) {
    const Matrix z = khatri_rao_all_but(out.model, k);
    const Matrix unfolded = unfold(t, k);
    const LsSolution ls = solve_least_squares(z, unfolded.transpose());
    out.degenerate = out.degenerate || ls.rank_deficient;
    out.model.set_factor(k, ls.solution.transpose());
    if (track_objective) out.objectives.push_back(objective(t, out.model));
  }
  return out;
}

CpRun cp_als(const DenseTensor& t, CpModel init, const AlsOptions& options) {
  using Clock = std::chrono::steady_clock;
  CpRun run{std::move(init), {}, {}, false};
  for (Index sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const auto start = Clock::now();
    AlsSweepResult result = cp_als_sweep(t, std::move(run.model));
    const auto stop = Clock::now();
    run.model = std::move(result.model);
    run.degenerate = run.degenerate || result.degenerate;
    run.sweep_seconds.push_back(std::chrono::duration<double>(stop - start).count());
    run.fits.push_back(fit(t, run.model));
    const std::size_t n = run.fits.size();
    if (n >= 2 && std::abs(run.fits[n - 1] - run.fits[n - 2]) < options.tolerance) break;
  }
  return run;
}

}  // namespace kfjlt
