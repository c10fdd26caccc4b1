#include <chrono>
#include <cmath>
#include <numeric>

#include "kfjlt/cp.hpp"
#include "kfjlt/dft.hpp"
#include "kfjlt/sketch_ls.hpp"

namespace kfjlt {

ComplexTensor mix_tensor(const DenseTensor& t, std::span<const SignVector> signs) {
  const CVector data = t.data().cast<Complex>();
  return ComplexTensor(t.shape(), kron_mix(t.shape(), signs, data));
}

UnmixedFactor unmix_factor(const Eigen::Ref<const CMatrix>& mixed, const SignVector& signs) {
  if (static_cast<Index>(mixed.rows()) != signs.size()) {
    throw std::domain_error("unmix_factor: row count does not match sign vector length");
  }
  UnmixedFactor out{Matrix(mixed.rows(), mixed.cols()), 0.0};
  for (Eigen::Index j = 0; j < mixed.cols(); ++j) {
    const CVector col = inverse_unitary_dft(mixed.col(j));
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      const Complex v = col(i) * static_cast<double>(signs[static_cast<Index>(i)]);
      out.factor(i, j) = v.real();
      out.imaginary_residue = std::max(out.imaginary_residue, std::abs(v.imag()));
    }
  }
  return out;
}

MixedCpState mix_model(const CpModel& model, std::span<const SignVector> signs) {
  if (signs.size() != model.degree()) {
    throw std::domain_error("mix_model: one sign vector per mode is required");
  }
  MixedCpState state{model, {}};
  for (std::size_t k = 0; k < model.degree(); ++k) {
    state.mixed_factors.push_back(mix_columns(model.factor(k), signs[k]));
  }
  return state;
}

ModeUpdate sketched_mode_update(const ComplexTensor& mixed, std::span<const SignVector> signs,
                                std::span<const CMatrix> mixed_factors, std::size_t mode,
                                std::span<const Index> rows) {
  const Shape& shape = mixed.shape();
  const std::size_t d = shape.degree();
  if (mode >= d) throw std::domain_error("sketched_mode_update: mode out of range");
  if (signs.size() != d || mixed_factors.size() != d) {
    throw std::domain_error("sketched_mode_update: one sign vector and factor per mode required");
  }
  if (rows.empty()) throw std::domain_error("sketched_mode_update: no sampled rows");
  const Shape rest = shape.without(mode);
  const Index n_k = shape.dim(mode);
  const Eigen::Index r = mixed_factors[0].cols();
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  const double scale = std::sqrt(static_cast<double>(rest.total()) / static_cast<double>(m));

  std::vector<std::size_t> other_modes;
  for (std::size_t l = 0; l < d; ++l) {
    if (l != mode) other_modes.push_back(l);
  }

  CMatrix sketched_z(m, r);
  CMatrix sketched_x(m, static_cast<Eigen::Index>(n_k));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Index row = rows[static_cast<Index>(i)];
    if (row >= rest.total()) throw std::domain_error("sketched_mode_update: row out of range");

    Index remaining = row;
    auto z_row = sketched_z.row(i);
    for (std::size_t p = 0; p < other_modes.size(); ++p) {
      const std::size_t l = other_modes[p];
      const Index coord = remaining % rest.dim(p);
      remaining /= rest.dim(p);
      if (p == 0) {
        z_row = mixed_factors[l].row(static_cast<Eigen::Index>(coord));
      } else {
        z_row.array() *= mixed_factors[l].row(static_cast<Eigen::Index>(coord)).array();
      }
    }
    z_row *= scale;

    CVector fiber = inverse_unitary_dft(mode_fiber(mixed, mode, row));
    for (Index q = 0; q < n_k; ++q) fiber(static_cast<Eigen::Index>(q)) *= static_cast<double>(signs[mode][q]);
    sketched_x.row(i) = scale * fiber.transpose();
  }

  const Matrix a = complexify(sketched_z);
  const Matrix b = complexify(sketched_x);
  const LsSolution ls = solve_least_squares(a, b);
  ModeUpdate out;
  out.factor = ls.solution.transpose();
  out.sketched_residual = (a * ls.solution - b).norm();
  out.degenerate = ls.rank_deficient || static_cast<Index>(m) < static_cast<Index>(r);
  return out;
}

CprandSweepResult cprand_mix_sweep(const ComplexTensor& mixed, std::span<const SignVector> signs,
                                   MixedCpState state,
                                   std::span<const std::vector<Index>> rows_per_mode) {
  const std::size_t d = mixed.shape().degree();
  if (rows_per_mode.size() != d) {
    throw std::domain_error("cprand_mix_sweep: one row sample per mode is required");
  }
  if (!(state.model.shape() == mixed.shape())) {
    throw std::domain_error("cprand_mix_sweep: tensor and model shapes differ");
  }
  CprandSweepResult out{std::move(state), false};
  for (std::size_t k = 0; k < d; ++k) {
    ModeUpdate update =
        sketched_mode_update(mixed, signs, out.state.mixed_factors, k, rows_per_mode[k]);
    out.degenerate = out.degenerate || update.degenerate;
    out.state.mixed_factors[k] = mix_columns(update.factor, signs[k]);
    out.state.model.set_factor(k, std::move(update.factor));
  }
  return out;
}

CpRun cprand_mix(const DenseTensor& t, CpModel init, const CprandOptions& options,
                 std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const Shape& shape = t.shape();
  const std::size_t d = shape.degree();
  if (d < 2) throw std::domain_error("cprand_mix: tensor degree must be at least 2");
  if (!options.exhaustive && options.rows == 0) {
    throw std::domain_error("cprand_mix: the number of sampled rows must be positive");
  }

  std::vector<SignVector> signs;
  for (std::size_t k = 0; k < d; ++k) signs.push_back(SignVector::draw(shape.dim(k), seed, k + 1));
  Rng rows_rng = Rng::substream(seed, d + 1);

  const ComplexTensor mixed = mix_tensor(t, signs);
  MixedCpState state = mix_model(init, signs);
  CpRun run{std::move(init), {}, {}, false};

  std::vector<std::vector<Index>> rows(d);
  for (Index sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const auto start = Clock::now();
    for (std::size_t k = 0; k < d; ++k) {
      const Index population = shape.total() / shape.dim(k);
      if (options.exhaustive) {
        rows[k].resize(population);
        std::iota(rows[k].begin(), rows[k].end(), Index{0});
      } else {
        rows[k] = sample_rows(population, options.rows, options.replacement, rows_rng);
      }
    }
    CprandSweepResult result = cprand_mix_sweep(mixed, signs, std::move(state), rows);
    const auto stop = Clock::now();
    state = std::move(result.state);
    run.degenerate = run.degenerate || result.degenerate;
    run.sweep_seconds.push_back(std::chrono::duration<double>(stop - start).count());
    run.fits.push_back(fit(t, state.model));
    const std::size_t n = run.fits.size();
    if (n >= 2 && std::abs(run.fits[n - 1] - run.fits[n - 2]) < options.tolerance) break;
  }
  run.model = std::move(state.model);
  return run;
}

}  // namespace kfjlt
