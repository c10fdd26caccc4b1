#include "kfjlt/bench/experiments.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "kfjlt/sketch_ls.hpp"

namespace kfjlt::bench {
namespace {

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Vector draw_vector(Index n, Distribution dist, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = dist == Distribution::gaussian ? rng.normal() : rng.uniform01();
  return v;
}

KroneckerVector draw_kron(const Shape& shape, Distribution dist, Rng& rng) {
  std::vector<Vector> factors;
  for (Index n : shape.dims()) factors.push_back(draw_vector(n, dist, rng));
  return KroneckerVector(std::move(factors));
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.normal();
  return a;
}

// Gaussian noise scaled to ||signal|| * 10^(-snr/20); zero for infinite SNR.
Vector noise_like(const Vector& signal, double snr_db, Rng& rng) {
  if (std::isinf(snr_db)) return Vector::Zero(signal.size());
  Vector g(signal.size());
  for (auto& x : g) x = rng.normal();
  return g * (signal.norm() * std::pow(10.0, -snr_db / 20.0) / g.norm());
}

std::string degree_label(std::string_view prefix, std::size_t d) {
  return std::string(prefix) + "-d" + std::to_string(d);
}

}  // namespace

std::uint64_t operator_seed(std::uint64_t master, Index trial, std::string_view label, Index m) {
  return substream_seed(substream_seed(master, trial), label_hash(label) ^ mix64(m));
}

std::vector<Index> factored_rows(Index m, std::size_t d) {
  const double root = std::round(std::pow(static_cast<double>(m), 1.0 / static_cast<double>(d)));
  return std::vector<Index>(d, std::max<Index>(1, static_cast<Index>(root)));
}

std::vector<TrialRecord> run_distortion(const ExperimentConfig& config) {
  const Shape& base = config.shape;
  const bool want_kron = std::find(config.structures.begin(), config.structures.end(),
                                   Structure::kron) != config.structures.end();
  const bool want_generic = std::find(config.structures.begin(), config.structures.end(),
                                      Structure::generic) != config.structures.end();
  const bool want_dense = want_generic || config.gaussian_baseline ||
                          std::find(config.degrees.begin(), config.degrees.end(), 1) !=
                              config.degrees.end();
  std::vector<TrialRecord> records;
  auto record = [&](std::string method, Index m, Index trial, std::uint64_t seed, double value) {
    records.push_back({"distortion", std::move(method), m, trial, seed, value, now_ns()});
  };

  for (Index t = 0; t < config.trials; ++t) {
    Rng rng = Rng::substream(config.seed, t);
    const KroneckerVector kv = draw_kron(base, config.dist, rng);
    const Vector generic = want_generic ? draw_vector(base.total(), config.dist, rng) : Vector();
    const Vector kron_dense = want_dense && want_kron ? kron_materialize(kv) : Vector();
    const double kron_norm = kron_norm_sq(kv);

    std::vector<KroneckerVector> regrouped;
    for (std::size_t d : config.degrees) regrouped.push_back(kv.regroup(d));

    for (Index m : config.m_grid) {
      for (std::size_t di = 0; di < config.degrees.size(); ++di) {
        const std::size_t d = config.degrees[di];
        const std::string label = d == 1 ? std::string("fjlt") : degree_label("kfjlt", d);
        const std::uint64_t seed = operator_seed(config.seed, t, label, m);
        Index m_run = m;
        std::vector<Index> per_factor;
        if (config.sampling == Sampling::before) {
          per_factor = factored_rows(m, d);
          m_run = 1;
          for (Index mk : per_factor) m_run *= mk;
        }

        if (d == 1) {
          const FjltOperator op = FjltOperator::sample(base.total(), m_run, seed, config.replacement);
          if (want_kron) {
            record(label, m_run, t, seed,
                   distortion_ratio(fjlt_apply(op, kron_dense).squaredNorm(), kron_norm));
          }
          if (want_generic) {
            record(label + "-generic", m_run, t, seed,
                   distortion_ratio(fjlt_apply(op, generic).squaredNorm(), generic.squaredNorm()));
          }
          continue;
        }

        const KroneckerVector& v = regrouped[di];
        const KfjltOperator op = KfjltOperator::sample(v.shape(), m_run, seed, config.replacement);
        if (want_kron) {
          record(label, m_run, t, seed,
                 distortion_ratio(kfjlt_apply_kron(op, v).squaredNorm(), kron_norm));
        }
        if (want_generic) {
          record(label + "-generic", m_run, t, seed,
                 distortion_ratio(kfjlt_apply_dense(op, generic).squaredNorm(),
                                  generic.squaredNorm()));
        }
        if (config.sampling == Sampling::before) {
          const FactoredKfjltOperator factored =
              FactoredKfjltOperator::with_signs(op, per_factor, seed, config.replacement);
          record(degree_label("factored", d), m_run, t, seed,
                 distortion_ratio(factored_apply(factored, v).squaredNorm(), kron_norm));
        }
      }

      if (config.gaussian_baseline) {
        const std::uint64_t seed = operator_seed(config.seed, t, "gaussian", m);
        if (want_kron) {
          record("gaussian", m, t, seed,
                 distortion_ratio(
                     testkit::gaussian_jlt_apply(seed, m, base.total(), kron_dense).squaredNorm(),
                     kron_norm));
        }
        if (want_generic) {
          record("gaussian-generic", m, t, seed,
                 distortion_ratio(
                     testkit::gaussian_jlt_apply(seed, m, base.total(), generic).squaredNorm(),
                     generic.squaredNorm()));
        }
      }
    }
  }
  return records;
}

std::vector<TrialRecord> run_ls(const ExperimentConfig& config) {
  const Shape& shape = config.shape;
  const Index r = config.rank;
  std::vector<TrialRecord> records;
  for (Index t = 0; t < config.trials; ++t) {
    Rng rng = Rng::substream(config.seed, t);
    std::vector<Matrix> factors;
    for (Index n : shape.dims()) factors.push_back(gaussian_matrix(n, r, rng));
    Vector xstar(static_cast<Eigen::Index>(r));
    for (auto& x : xstar) x = rng.normal();
    const Vector signal = khatri_rao(factors) * xstar;
    const KrlsProblem problem(factors, signal + noise_like(signal, config.snr_db, rng));

    auto solve_and_record = [&](const std::string& label, const KfjltOperator& op,
                                std::uint64_t seed) {
      const SketchedSolution sol = solve_sketched_ls(problem, op);
      const ResidualRatio ratio = residual_ratio(problem, sol.solution);
      records.push_back({"ls", ratio.absolute ? label + "-absolute" : label, op.m(), t, seed,
                         ratio.value, now_ns()});
    };
    for (Index m : config.m_grid) {
      const std::uint64_t seed = operator_seed(config.seed, t, "kfjlt", m);
      solve_and_record("kfjlt", KfjltOperator::sample(shape, m, seed, config.replacement), seed);
    }
    if (config.exhaustive) {
      const std::uint64_t seed = operator_seed(config.seed, t, "kfjlt-full", shape.total());
      solve_and_record("kfjlt-full", KfjltOperator::full(shape, seed), seed);
    }
  }
  return records;
}

CprandResult run_cprand(const ExperimentConfig& config) {
  const DenseTensor loaded = config.tensor.empty() ? DenseTensor(Shape({1})) : read_tensor(config.tensor);
  const Shape shape = config.tensor.empty() ? config.shape : loaded.shape();
  if (shape.degree() < 2) throw ConfigError("cprand: the tensor must have degree at least 2");
  CprandResult out;

  auto keep = [&](const std::string& label, Index m, Index t, std::uint64_t seed, const CpRun& run) {
    out.records.push_back({"cprand", label, m, t, seed, run.fits.empty() ? 0.0 : run.fits.back(), now_ns()});
    for (std::size_t s = 0; s < run.fits.size(); ++s) {
      out.trajectories.push_back({label, m, t, s + 1, run.fits[s], run.sweep_seconds[s]});
    }
  };

  for (Index t = 0; t < config.trials; ++t) {
    Rng rng = Rng::substream(config.seed, t);
    DenseTensor x = loaded;
    if (config.tensor.empty()) {
      x = reconstruct(CpModel::random(shape, config.rank, rng));
      x.data() += noise_like(x.data(), config.snr_db, rng);
    }
    const CpModel init = CpModel::random(shape, config.rank, rng);

    keep("als", 0, t, config.seed, cp_als(x, init, {config.max_sweeps, config.tolerance}));
    for (Index m : config.m_grid) {
      const std::uint64_t seed = operator_seed(config.seed, t, "cprand-mix", m);
      CprandOptions options{config.max_sweeps, config.tolerance, m, config.replacement, false};
      keep("cprand-mix", m, t, seed, cprand_mix(x, init, options, seed));
    }
    if (config.exhaustive) {
      const std::uint64_t seed = operator_seed(config.seed, t, "cprand-full", 0);
      CprandOptions options{config.max_sweeps, config.tolerance, 0, config.replacement, true};
      keep("cprand-full", 0, t, seed, cprand_mix(x, init, options, seed));
    }
  }
  return out;
}

void emit_trajectories(const std::filesystem::path& path, const std::vector<TrajectoryRow>& rows) {
  std::filesystem::path tpath = path;
  tpath.replace_filename(path.stem().string() + ".trajectory.csv");
  std::ofstream out(tpath, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + tpath.string() + " for writing");
  out << "method,m,trial,sweep,fit,seconds\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.m << ',' << r.trial << ',' << r.sweep << ',' << format_double(r.fit)
        << ',' << format_double(r.seconds) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write to " + tpath.string() + " failed");
}

std::vector<ConcentrationRow> run_concentration(const ExperimentConfig& config) {
  constexpr Index kInstances = 5;
  const double multiples[] = {0.5, 1.0, 2.0, 3.0};
  std::vector<ConcentrationRow> rows;
  for (Index n : config.m_grid) {
    for (Index i = 0; i < kInstances; ++i) {
      const std::uint64_t seed = substream_seed(substream_seed(config.seed, n), i);
      Rng rng(seed);
      const Vector x = draw_vector(n, Distribution::gaussian, rng);
      Matrix a = gaussian_matrix(n, n, rng);
      a = (a + a.transpose()).eval();
      a.diagonal().setZero();
      Rng mc = Rng::substream(seed, 1);
      for (double c : multiples) {
        rows.push_back({"hoeffding", n, i,
                        testkit::hoeffding_tail_check(x, c * x.norm(), config.trials, mc)});
        if (n >= 2) {
          rows.push_back({"hanson-wright", n, i,
                          testkit::hanson_wright_tail_check(a, c * a.norm(), config.trials, mc)});
        }
      }
    }
  }
  return rows;
}

void emit_concentration_csv(const std::filesystem::path& path,
                            const std::vector<ConcentrationRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "experiment,check,n,instance,threshold,frequency,bound,radius,trials,exact,holds\n";
  for (const auto& r : rows) {
    out << "concentration," << r.check << ',' << r.n << ',' << r.trial << ','
        << format_double(r.report.threshold) << ',' << format_double(r.report.frequency) << ','
        << format_double(r.report.bound) << ',' << format_double(r.report.radius) << ','
        << r.report.trials << ',' << (r.report.exact ? 1 : 0) << ',' << (r.report.holds() ? 1 : 0)
        << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write to " + path.string() + " failed");
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << t.shape().to_string() << '\n';
  if (path.extension() == ".bin") {
    for (double v : t.data()) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  } else {
    for (double v : t.data()) out << format_double(v) << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write to " + path.string() + " failed");
}

DenseTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  Shape shape{1};
  try {
    shape = Shape::parse(header);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": bad shape header: " + e.what());
  }
  Vector data(static_cast<Eigen::Index>(shape.total()));
  if (path.extension() == ".bin") {
    for (auto& v : data) {
      std::uint64_t bits = 0;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        throw std::runtime_error(path.string() + ": fewer values than the shape requires");
      }
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      v = std::bit_cast<double>(bits);
    }
  } else {
    for (auto& v : data) {
      std::string token;
      if (!(in >> token)) throw std::runtime_error(path.string() + ": fewer values than the shape requires");
      v = std::stod(token);
    }
  }
  return DenseTensor(shape, std::move(data));
}

}  // namespace kfjlt::bench
