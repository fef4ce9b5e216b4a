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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ccembed/bdf.hpp"
#include "ccembed/compose.hpp"
#include "ccembed/curvature.hpp"
#include "ccembed/errors.hpp"
#include "ccembed/examples.hpp"
#include "ccembed/pipeline.hpp"

namespace ccembed {

namespace {

class Suite {
 public:
  Suite(SuiteSummary& out, std::string name) : out_(out), name_(std::move(name)) {}

  void check(const std::string& check, double value, Relation rel, double tol,
             std::string detail = "") {
    StageRecord tmp;
    tmp.check(check, value, rel, tol);
    out_.rows.push_back({name_, check, value, rel, tol, tmp.pass, std::move(detail)});
  }

  /// Runs `body`, recording an unexpected error as a failed row.
  template <typename F>
  void guarded(const std::string& check, F&& body) {
    try {
      body();
    } catch (const Error& err) {
      out_.rows.push_back({name_, check, std::nan(""), Relation::Info, 0.0, false,
                           err.what()});
    }
  }

 private:
  SuiteSummary& out_;
  std::string name_;
};

double cutoff_identity_error(CutoffKind kind, double eps) {
  const CutoffSpec q = make_cutoff(eps, kind);
  const BdfProfile profile = compute_phi(q);
  double worst = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double r = eps * i / 201.0;
    worst = std::max(worst, std::abs(profile.measured_one_plus_rphi(r) - (1.0 - q.Q(r))));
  }
  return worst;
}

void invariants(SuiteSummary& out) {
  Suite s(out, "invariants");
  for (CutoffKind kind : {CutoffKind::Smoothstep5, CutoffKind::SmoothExp,
                          CutoffKind::PiecewiseLinear}) {
    const std::string name = "cutoff identity " + to_string(kind);
    s.guarded(name, [&] {
      s.check(name, cutoff_identity_error(kind, 0.9), Relation::LessEqual, 1e-8);
    });
  }

  s.guarded("G consistency scaled-disk(4) 64x64", [&] {
    const MetricSpec spec = builtin_example("scaled-disk(4)");
    const NormalFormData nf = flow_collar(spec, 0, 0.9, 64, 64);
    const BdfField bdf = assemble_bdf(nf, compute_phi(make_cutoff(0.9, CutoffKind::Smoothstep5)));
    const AdjustedTensorG G = assemble_G(spec, nf, bdf, 1.0);
    s.check("G consistency scaled-disk(4) 64x64", G.max_relative_disagreement,
            Relation::LessEqual, 1e-9);
    s.check("G min eigenvalue scaled-disk(4)", G.min_eigenvalue_overall(),
            Relation::Greater, 0.0);
  });

  s.guarded("kappa_inf bdf invariance", [&] {
    for (const std::string& name : builtin_example_names()) {
      const MetricSpec spec = builtin_example(name);
      const Expression& r = spec.reference_bdf();
      const Expression x = parse_expression(
          "exp(0.3*sin(y1))*(" + r.to_string() + ")", spec.coordinate_names());
      const KappaInfinityField a = kappa_infinity_field(spec, r, 32);
      const KappaInfinityField b = kappa_infinity_field(spec, x, 32);
      double gap = 0.0;
      for (std::size_t i = 0; i < a.kappa.size(); ++i)
        gap = std::max(gap, std::abs(a.kappa[i] - b.kappa[i]));
      s.check("kappa_inf bdf invariance " + name, gap, Relation::LessEqual, 1e-8);
    }
  });

  s.guarded("kappa_inf rescaling law", [&] {
    for (const std::string& name : builtin_example_names()) {
      const MetricSpec spec = builtin_example(name);
      const KappaInfinityField base = kappa_infinity_field(spec, spec.reference_bdf(), 32);
      double gap = 0.0;
      for (double lambda : {0.5, 2.0, 5.0}) {
        const MetricSpec scaled = spec.rescaled(lambda);
        const KappaInfinityField f = kappa_infinity_field(scaled, scaled.reference_bdf(), 32);
        for (std::size_t i = 0; i < f.kappa.size(); ++i)
          gap = std::max(gap, std::abs(f.kappa[i] - kappa_rescale(base.kappa[i], lambda)));
      }
      s.check("kappa_inf rescaling law " + name, gap, Relation::LessEqual, 1e-12);
    }
  });

  s.guarded("analytic flat-cylinder isometry", [&] {
    PipelineConfig cfg = builtin_config("flat-cylinder(1,1)");
    cfg.cutoff = CutoffKind::Zero;
    cfg.method = EmbedMethod::Analytic;
    cfg.analytic = "flat-cylinder(1,1)";
    cfg.r_count = cfg.boundary_count = 32;
    const PipelineResult res = run_pipeline(cfg);
    double residual = std::nan("");
    if (const StageRecord* rec = res.report.find("p-embedding"))
      for (const auto& e : rec->entries)
        if (e.key == "isometry_residual") residual = e.value;
    s.check("analytic flat-cylinder isometry", residual, Relation::LessEqual, 1e-8);
  });

  s.guarded("totally geodesic half-plane", [&] {
    for (double lambda : {1.0, 2.0}) {
      const PEmbedding u = totally_geodesic_half_plane(3, lambda);
      const InducedCurvatureRecord rec = induced_curvature_inequality(u);
      const double gap = std::max(std::abs(rec.min_induced + lambda * lambda),
                                  std::abs(rec.max_induced + lambda * lambda));
      std::ostringstream name;
      name << "totally geodesic half-plane lambda=" << lambda;
      s.check(name.str(), gap, Relation::LessEqual, 1e-8);
    }
  });
}

void limits(SuiteSummary& out) {
  Suite s(out, "limits");
  const std::vector<double> radii = {0.2, 0.1, 0.05, 0.025};
  const std::vector<double> b = {0.5};
  const std::pair<PlaneFamily, std::string> families[] = {
      {PlaneFamily::NormalTangent, "normal-tangent"},
      {PlaneFamily::TangentTangent, "tangent-tangent"}};

  for (const auto& [family, fname] : families) {
    s.guarded("hyperbolic-disk " + fname, [&] {
      const MetricSpec spec = builtin_example("hyperbolic-disk");
      double worst = 0.0;
      for (const auto& sample : curvature_limit_scan(spec, 0, b, family, radii))
        worst = std::max(worst, std::abs(sample.curvature + 1.0));
      s.check("hyperbolic-disk |K + 1| " + fname, worst, Relation::LessEqual, 1e-6);
    });
    s.guarded("scaled-disk(4) " + fname, [&] {
      const MetricSpec spec = builtin_example("scaled-disk(4)");
      double worst = 0.0;
      for (const auto& sample : curvature_limit_scan(spec, 0, b, family, radii))
        worst = std::max(worst, sample.error);
      s.check("scaled-disk(4) |K - kappa_inf| " + fname, worst, Relation::LessEqual,
              1e-12, "constant curvature: error is roundoff, no decay to observe");
    });
    s.guarded("normal-form-constK(0.5) " + fname, [&] {
      const MetricSpec spec = builtin_example("normal-form-constK(0.5)");
      const auto scan = curvature_limit_scan(spec, 0, b, family, radii);
      int violations = 0;
      std::ostringstream detail;
      for (std::size_t i = 0; i < scan.size(); ++i) {
        detail << (i ? " " : "errors ") << format_number(scan[i].error);
        if (i > 0 && !(scan[i].error < scan[i - 1].error)) ++violations;
      }
      s.check("normal-form-constK(0.5) decay violations " + fname,
              static_cast<double>(violations), Relation::Equal, 0.0, detail.str());
    });
  }
}

void negative_controls(SuiteSummary& out) {
  Suite s(out, "negative-controls");
  s.guarded("borderline epsilon choice", [&] {
    const MetricSpec spec = builtin_example("borderline");
    const NormalFormData nf = flow_collar(spec, 0, 0.5, 32, 32);
    double k2 = std::nan("");
    try {
      choose_epsilon(nf);
    } catch (const HypothesisViolation& hv) {
      k2 = hv.k2();
    }
    s.check("borderline raises HypothesisViolation (K2 at p)", k2,
            Relation::GreaterEqual, 1.0 - 1e-12);
    const BdfField bdf = assemble_bdf(nf, compute_phi(make_cutoff(0.5, CutoffKind::Smoothstep5)));
    const AdjustedTensorG G = assemble_G(spec, nf, bdf);
    s.check("borderline min eigenvalue / trace at p", G.min_eigenvalue[0] / G.G[0].trace(),
            Relation::LessEqual, 1e-6);
  });

  s.guarded("hyperbolic-disk lambda=1 exit code", [&] {
    PipelineConfig cfg = builtin_config("hyperbolic-disk");
    const PipelineResult res = run_pipeline(cfg, PipelineStage::Kappa);
    s.check("hyperbolic-disk lambda=1 exit code", res.report.exit_code,
            Relation::Equal, kExitHypothesis);
  });

  s.guarded("seeded zero dx fault", [&] {
    PEmbedding u = totally_geodesic_half_plane(2, 1.0);
    u.jacobians[3].row(0).setZero();
    std::vector<SmallMatrix> x2g(u.grid.node_count(), SmallMatrix::Identity(2, 2));
    const PEmbeddingChecks c =
        verify_p_embedding(u, SymTensorField(Frame::Coordinate, std::move(x2g)));
    s.check("seeded zero dx fault detected (simple b-map flag)",
            c.simple_b_map ? 1.0 : 0.0, Relation::Equal, 0.0);
  });
}

}  // namespace

SuiteName parse_suite_name(const std::string& name) {
  if (name == "invariants") return SuiteName::Invariants;
  if (name == "limits") return SuiteName::Limits;
  if (name == "negative-controls") return SuiteName::NegativeControls;
  if (name == "all") return SuiteName::All;
  throw ConfigError("unknown suite '" + name +
                    "' (invariants, limits, negative-controls, all)");
}

bool SuiteSummary::pass() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

std::string SuiteSummary::to_text() const {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.suite.size() + r.check.size() + 2);
  std::ostringstream os;
  for (const auto& r : rows) {
    const std::string label = r.suite + ": " + r.check;
    os << (r.pass ? "PASS  " : "FAIL  ") << label << std::string(width - label.size() + 2, ' ')
       << format_number(r.value);
    if (r.relation != Relation::Info)
      os << ' ' << to_string(r.relation) << ' ' << format_number(r.tolerance);
    if (!r.detail.empty()) os << "  [" << r.detail << ']';
    os << '\n';
  }
  os << (pass() ? "suite passed" : "suite FAILED") << '\n';
  return os.str();
}

SuiteSummary run_suite(SuiteName name) {
  SuiteSummary out;
  if (name == SuiteName::Invariants || name == SuiteName::All) invariants(out);
  if (name == SuiteName::Limits || name == SuiteName::All) limits(out);
  if (name == SuiteName::NegativeControls || name == SuiteName::All)
    negative_controls(out);
  return out;
}

}  // namespace ccembed
