// Copyright 2026 The ccembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ccembed/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "ccembed/bdf.hpp"
#include "ccembed/compose.hpp"
#include "ccembed/curvature.hpp"
#include "ccembed/embed.hpp"
#include "ccembed/errors.hpp"
#include "ccembed/examples.hpp"

namespace ccembed {

namespace {

std::string point_text(const SmallVector& p) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << format_number(p(i));
  os << ')';
  return os.str();
}

std::vector<std::string> boundary_names(int m) {
  std::vector<std::string> names;
  for (int k = 1; k < m; ++k) names.push_back("y" + std::to_string(k));
  return names;
}

std::string coords_header(int m) {
  std::string h = "r";
  for (const auto& n : boundary_names(m)) h += "," + n;
  return h;
}

std::string coords_row(const CollarGrid& grid, int node) {
  std::ostringstream os;
  os << std::setprecision(17);
  const SmallVector c = grid.coords(node);
  for (int k = 0; k < c.size(); ++k) os << (k ? "," : "") << c(k);
  return os.str();
}

std::string kappa_csv(const KappaInfinityField& f, int m) {
  std::ostringstream os;
  os << std::setprecision(17) << "end";
  for (int k = 1; k < m; ++k) os << ",b" << k;
  os << ",kappa_inf\n";
  for (std::size_t i = 0; i < f.kappa.size(); ++i) {
    os << f.ends[i];
    for (int k = 0; k < f.boundary_coords[i].size(); ++k)
      os << ',' << f.boundary_coords[i](k);
    os << ',' << f.kappa[i] << '\n';
  }
  return os.str();
}

std::string adjusted_metric_csv(const CollarGrid& grid, const AdjustedTensorG& G) {
  const int m = grid.dim();
  std::ostringstream os;
  os << std::setprecision(17) << coords_header(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) os << ",G" << i + 1 << j + 1;
  os << ",min_eigenvalue\n";
  for (int n = 0; n < grid.node_count(); ++n) {
    os << coords_row(grid, n);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) os << ',' << G.G[n](i, j);
    os << ',' << G.min_eigenvalue[n] << '\n';
  }
  return os.str();
}

std::string residual_csv(const CollarGrid& grid, const std::vector<double>& values,
                         const std::string& column) {
  std::ostringstream os;
  os << std::setprecision(17) << coords_header(grid.dim()) << ',' << column << '\n';
  for (int n = 0; n < grid.node_count(); ++n)
    os << coords_row(grid, n) << ',' << values[n] << '\n';
  return os.str();
}

int exit_code_for(const Error& err) {
  if (dynamic_cast<const HypothesisViolation*>(&err)) return kExitHypothesis;
  if (dynamic_cast<const NotConverged*>(&err)) return kExitNotConverged;
  if (dynamic_cast<const ConfigError*>(&err)) return kExitConfig;
  return kExitFail;
}

class Runner {
 public:
  Runner(const PipelineConfig& cfg, PipelineStage until)
      : cfg_(cfg), until_(until) {}

  PipelineResult run() {
    out_.report.config = cfg_.name;
    const std::vector<void (Runner::*)()> stages = {
        &Runner::setup, &Runner::kappa, &Runner::normal_form, &Runner::bdf,
        &Runner::adjusted_metric, &Runner::nash_step, &Runner::p_embedding,
        &Runner::curvature};
    for (auto stage : stages) {
      if (stopped_) break;
      try {
        (this->*stage)();
      } catch (const Error& err) {
        StageRecord& rec = out_.report.stages.back();
        rec.fail(err.what());
        if (const auto* hv = dynamic_cast<const HypothesisViolation*>(&err)) {
          SmallVector node(static_cast<int>(hv->node().size()));
          for (int i = 0; i < node.size(); ++i) node(i) = hv->node()[i];
          rec.note("offending_node", point_text(node));
          rec.note("K2", format_number(hv->k2()));
        }
        out_.report.set_exit(exit_code_for(err));
        stopped_ = true;
      }
      if (!out_.report.stages.empty() && !out_.report.stages.back().pass) {
        out_.report.set_exit(kExitFail);
        stopped_ = true;
      }
    }
    return std::move(out_);
  }

 private:
  const PipelineConfig& cfg_;
  PipelineStage until_;
  PipelineResult out_;
  bool stopped_ = false;

  std::optional<MetricSpec> spec_;
  std::optional<MetricSpec> scaled_;
  std::optional<NormalFormData> nf_;
  std::optional<BdfField> bdf_;
  std::optional<AdjustedTensorG> G_;
  std::optional<EuclideanEmbedding> v_;
  std::optional<PEmbedding> u_;

  double lambda2() const { return cfg_.lambda * cfg_.lambda; }
  void field(const std::string& name, std::string text) {
    out_.fields.emplace_back(name, std::move(text));
  }
  void stop_after(PipelineStage stage) {
    if (until_ == stage) stopped_ = true;
  }

  void setup() {
    StageRecord& rec = out_.report.add("setup");
    cfg_.validate();
    spec_ = cfg_.metric();
    const ModelManifold& M = spec_->manifold();
    if (M.kind() == ManifoldKind::Disk && M.dim() != 2)
      throw ConfigError(
          "the pipeline needs a regular boundary chart; use a collar torus for m = 3");
    rec.note("spec", spec_->name());
    rec.note("manifold", M.describe());
    rec.info("lambda", cfg_.lambda);
    rec.info("grid_r", cfg_.r_count);
    rec.info("grid_boundary", cfg_.boundary_count);
    rec.note("cutoff", to_string(cfg_.cutoff));
    scaled_ = spec_->rescaled(cfg_.lambda);
    std::vector<SmallVector> boundary;
    for (int end = 0; end < M.boundary_count(); ++end)
      for (const auto& b : boundary_samples(M, cfg_.boundary_count))
        boundary.push_back(M.boundary_point(end, std::span(b.data(), b.size())));
    scaled_->validate({}, boundary);
  }

  void kappa() {
    StageRecord& rec = out_.report.add("kappa");
    const int m = spec_->dim();
    const KappaInfinityField f =
        kappa_infinity_field(*spec_, spec_->reference_bdf(), cfg_.boundary_count);
    const KappaInfinityField fs =
        kappa_infinity_field(*scaled_, scaled_->reference_bdf(), cfg_.boundary_count);
    double rescale_gap = 0.0;
    for (std::size_t i = 0; i < f.kappa.size(); ++i)
      rescale_gap = std::max(rescale_gap,
                             std::abs(fs.kappa[i] - kappa_rescale(f.kappa[i], cfg_.lambda)));
    rec.info("kappa_min", f.min());
    rec.info("kappa_max", f.max());
    rec.check("rescaling_gap", rescale_gap, Relation::LessEqual,
              1e-12 * std::max(1.0, std::abs(f.min()) / lambda2()));
    const auto worst = std::min_element(f.kappa.begin(), f.kappa.end()) - f.kappa.begin();
    // (kappa_min + lambda^2) / lambda^2, positive iff kappa_inf > -lambda^2.
    const double margin = (f.min() + lambda2()) / lambda2();
    if (!rec.check("hypothesis_margin", margin, Relation::Greater,
                   cfg_.tolerances.hypothesis)) {
      const ModelManifold& M = spec_->manifold();
      const SmallVector& b = f.boundary_coords[worst];
      rec.note("offending_node", "end " + std::to_string(f.ends[worst]) + ", b = " +
                                     point_text(b) + ", chart point " +
                                     point_text(M.boundary_point(
                                         f.ends[worst], std::span(b.data(), b.size()))));
      out_.report.set_exit(kExitHypothesis);
      stopped_ = true;
    }
    field("kappa.csv", kappa_csv(f, m));
    stop_after(PipelineStage::Kappa);
  }

  void normal_form() {
    StageRecord& rec = out_.report.add("normal-form");
    FlowOptions opts;
    opts.steps = cfg_.flow_steps;
    nf_ = flow_collar(*scaled_, 0, cfg_.epsilon, cfg_.r_count, cfg_.boundary_count, opts);
    const double eps = choose_epsilon(*nf_, cfg_.margin);
    rec.info("epsilon_requested", cfg_.epsilon);
    if (eps != cfg_.epsilon)
      nf_ = flow_collar(*scaled_, 0, eps, cfg_.r_count, cfg_.boundary_count, opts);
    rec.info("epsilon", eps);
    double k2 = 0.0;
    for (int i = 0; i < nf_->grid.boundary_count(); ++i) k2 = std::max(k2, nf_->K2[i]);
    rec.check("boundary_K2_max", k2, Relation::Less, 1.0);
    rec.check("level_defect", nf_->max_level_defect, Relation::LessEqual,
              opts.level_tolerance);
    rec.check("cross_term", nf_->max_cross_term, Relation::LessEqual,
              opts.orthogonality_tolerance);
    field("normal_form.csv", normal_form_csv(*nf_, boundary_names(spec_->dim())));
  }

  void bdf() {
    StageRecord& rec = out_.report.add("bdf");
    const CutoffSpec q = make_cutoff(nf_->epsilon(), cfg_.cutoff);
    BdfProfile profile = compute_phi(q);
    double worst = 0.0;
    const int samples = 200;
    for (int i = 1; i <= samples; ++i) {
      const double r = q.epsilon() * i / (samples + 1);
      worst = std::max(worst, std::abs(profile.measured_one_plus_rphi(r) - (1.0 - q.Q(r))));
    }
    rec.check("cutoff_identity", worst, Relation::LessEqual,
              cfg_.tolerances.cutoff_identity);
    if (profile.has_plateau()) rec.info("plateau_x", profile.plateau());
    field("bdf_profile.csv", bdf_profile_csv(profile));
    bdf_ = assemble_bdf(*nf_, std::move(profile));
  }

  void adjusted_metric() {
    StageRecord& rec = out_.report.add("adjusted-metric");
    G_ = assemble_G(*scaled_, *nf_, *bdf_, cfg_.tolerances.consistency);
    rec.check("consistency", G_->max_relative_disagreement, Relation::LessEqual,
              cfg_.tolerances.consistency);
    rec.check("min_eigenvalue", G_->min_eigenvalue_overall(), Relation::Greater, 0.0);
    field("adjusted_metric.csv", adjusted_metric_csv(nf_->grid, *G_));
    stop_after(PipelineStage::Bdf);
  }

  void nash_step() {
    StageRecord& rec = out_.report.add("nash-step");
    const CollarGrid& grid = nf_->grid;
    if (cfg_.method == EmbedMethod::Analytic) {
      std::vector<double> params;
      const std::string name = parse_call(cfg_.analytic, params);
      rec.note("method", "analytic " + cfg_.analytic);
      v_ = analytic_embedding(name, params, grid);
      const SymTensorField Ga = analytic_metric(name, params, grid);
      double gap = 0.0;
      for (int n = 0; n < grid.node_count(); ++n)
        gap = std::max(gap, (Ga[n] - G_->G[n]).norm() / G_->G[n].norm());
      rec.check("analytic_metric_gap", gap, Relation::LessEqual,
                cfg_.tolerances.isometry);
    } else {
      rec.note("method", cfg_.method == EmbedMethod::Gradient ? "gradient"
                                                              : "gauss-newton");
      OptimizeResult res = optimize_embedding(grid, G_->G, cfg_.optimizer);
      rec.note("init", res.init);
      rec.info("iterations", static_cast<double>(res.trace.size()) - 1);
      field("trace.csv", trace_csv(res.trace));
      if (!res.converged) {
        rec.fail("optimizer did not reach the stop residual");
        out_.report.set_exit(kExitNotConverged);
      }
      v_ = std::move(res.embedding);
    }
    rec.info("N", v_->ambient_dim());
    const EmbeddingDiagnostics d = embedding_diagnostics(*v_, G_->G);
    rec.check("nash_residual", d.max_relative_defect, Relation::LessEqual,
              cfg_.method == EmbedMethod::Analytic ? cfg_.tolerances.isometry
                                                   : cfg_.optimizer.stop_residual);
    rec.info("nash_residual_rms", d.rms_relative_defect);
    rec.check("min_singular_value", d.min_singular_value, Relation::Greater,
              cfg_.tolerances.immersion);
    rec.check("injectivity_ratio", d.injectivity_ratio, Relation::Greater,
              cfg_.tolerances.injectivity);
    field("embedding.csv", embedding_csv(*v_));
    field("nash_defect.csv", residual_csv(grid, d.defect, "defect"));
    stop_after(PipelineStage::Embed);
  }

  void p_embedding() {
    StageRecord& rec = out_.report.add("p-embedding");
    u_ = compose(nf_->grid, *bdf_, *v_, cfg_.lambda);
    const IsometryCheck iso = pullback_halfspace(*u_, G_->x2g);
    rec.check("isometry_residual", iso.max_residual, Relation::LessEqual,
              cfg_.tolerances.isometry);
    rec.info("isometry_residual_rms", iso.rms_residual);
    const PEmbeddingChecks c = verify_p_embedding(
        *u_, G_->x2g, {cfg_.tolerances.immersion, cfg_.tolerances.injectivity});
    rec.check("boundary_x_max", c.max_boundary_x, Relation::Equal, 0.0);
    rec.check("boundary_dx_min", c.min_boundary_dx, Relation::Greater, 0.0);
    rec.check("interior_x_min", c.min_interior_x, Relation::Greater, 0.0);
    rec.check("min_singular_value", c.min_singular_value, Relation::Greater,
              cfg_.tolerances.immersion);
    rec.check("injectivity_ratio", c.injectivity_ratio, Relation::Greater,
              cfg_.tolerances.injectivity);
    field("p_embedding.csv", pembedding_csv(*u_));
    field("isometry_residual.csv", residual_csv(nf_->grid, iso.residual, "residual"));
  }

  void curvature() {
    StageRecord& rec = out_.report.add("curvature");
    const int nb = nf_->grid.boundary_count();
    std::vector<double> expected(nb);
    double coherence = 0.0;
    for (int i = 0; i < nb; ++i) {
      const SmallVector& p = nf_->chart_points[i];
      expected[i] = kappa_infinity(*spec_, std::span(p.data(), p.size()));
      coherence = std::max(coherence, std::abs(expected[i] + lambda2() * nf_->K2[i]));
    }
    const InducedCurvatureRecord ind = induced_curvature_inequality(
        *u_, expected, cfg_.tolerances.inequality, cfg_.tolerances.kappa);
    rec.info("induced_kappa_max", ind.max_induced);
    rec.check("induced_kappa_min", ind.min_induced, Relation::GreaterEqual,
              -lambda2() - cfg_.tolerances.inequality);
    rec.check("induced_vs_input_gap", ind.max_gap, Relation::LessEqual,
              cfg_.tolerances.kappa);
    rec.check("boundary_K2_vs_input_gap", coherence, Relation::LessEqual,
              cfg_.tolerances.kappa);
  }
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, PipelineStage until) {
  return Runner(cfg, until).run();
}

std::string write_outputs(const PipelineConfig& cfg, const PipelineResult& result,
                          bool timestamp) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "'");
  auto write = [&](const std::string& name, const std::string& text) {
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream out(path);
    out << text;
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return path.string();
  };
  const std::string report = write(
      "report.txt", result.report.to_text(
                        timestamp ? std::optional<std::string>(utc_timestamp())
                                  : std::nullopt));
  if (cfg.dump_fields)
    for (const auto& [name, text] : result.fields) write(name, text);
  return report;
}

}  // namespace ccembed
