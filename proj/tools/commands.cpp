#include "commands.hpp"

#include <chrono>
#include <memory>

#include "akg/eta.hpp"
#include "akg/linalg.hpp"

namespace akg {

namespace {

enum class Command { Validate, ChernRicci, Twist, Verify };

Command command_of(const std::string& name) {
  if (name == "validate") return Command::Validate;
  if (name == "chern-ricci") return Command::ChernRicci;
  if (name == "twist") return Command::Twist;
  if (name == "verify") return Command::Verify;
  throw InputError("unknown command '" + name + "'");
}

// Inputs of one evaluation, either symbolic or at one sample point.
template <class S>
struct Stage {
  AKStructure<S> s;
  Mat<S> frame;
  std::optional<Vec<S>> x;
  std::optional<Mat<S>> psi_tilde;
  std::optional<TwistMap<S>> twist;
};

template <class S>
struct Outputs {
  Vec<S> im_trace;
  Mat<S> rho;
  Vec<S> eta;
  Vec<S> s1;
  Vec<S> im_trace_twisted;
  Mat<S> rho_twisted;
};

template <class S>
void append_prefixed(Residuals<S>& out, const Residuals<S>& in, const std::string& prefix) {
  for (const auto& r : in) out.push_back({prefix + r.check, r.component, r.value});
}

template <class S>
Outputs<S> collect(Command cmd, const Stage<S>& st, TheoremResiduals<S>& out) {
  Outputs<S> o;
  const AKStructure<S>& s = st.s;
  check_patch(*s.patch, out.checks);
  const Connection<S> lc = levi_civita(s);
  check_structure(s, lc, out.checks);
  if (cmd == Command::Validate) return o;

  if (cmd == Command::ChernRicci) {
    check_adapted(s, st.frame, out.checks);
    const ChernRicciData<S> base = chern_ricci_data(s, st.frame);
    check_chern(s, base.lc, base.chern, out.checks);
    check_chern_ricci(s, base, out.checks);
    o.im_trace = base.im_trace;
    o.rho = base.rho;
    return o;
  }

  if (st.psi_tilde) check_pre_twist(*st.psi_tilde, *st.x, s, lc, out.checks);
  if (cmd == Command::Twist) {
    check_twist_map(s, *st.twist, out.checks);
    const AKStructure<S> tw = twisted_structure(s, *st.twist);
    check_omega_preserved(s, tw, out.checks);
    Residuals<S> r;
    check_structure(tw, levi_civita(tw), r);
    append_prefixed(out.checks, r, "twisted ");
    return o;
  }

  const TheoremData<S> d = verify_theorem(s, *st.twist, st.frame, out);
  check_chern(s, d.base.lc, d.base.chern, out.checks);
  check_chern_ricci(s, d.base, out.checks);
  o.im_trace = d.base.im_trace;
  o.rho = d.base.rho;
  o.eta = d.eta.eta;
  o.s1 = d.eta.s1;
  o.im_trace_twisted = d.twisted_data.im_trace;
  o.rho_twisted = d.twisted_data.from_curvature.rho;
  return o;
}

std::vector<std::string> strings(const Vec<Expr>& v) {
  std::vector<std::string> out;
  for (int i = 0; i < v.size(); ++i) out.push_back(to_string(v(i)));
  return out;
}

std::vector<std::vector<std::string>> strings(const Mat<Expr>& m) {
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<std::string>> upper_triangle(const Mat<Expr>& m) {
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i + 1 < m.rows(); ++i) {
    std::vector<std::string> row;
    for (int j = i + 1; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

CheckResult merged(const std::string& name, const std::vector<CheckResult>& parts) {
  CheckResult c{name, "proved", 0, 0, std::nullopt, ""};
  for (const auto& p : parts) {
    c.components += p.components;
    if (c.failed()) continue;
    if (p.failed()) {
      c.verdict = "failed";
      c.residual = p.residual;
      c.witness = p.witness;
      c.note = p.note;
    } else {
      if (p.verdict == "numeric") c.verdict = "numeric";
      c.residual = std::max(c.residual, p.residual);
    }
  }
  return c;
}

// Splits condition (ii) residuals from condition (i) and folds each into one result.
void set_conditions(Report& r, const std::vector<CheckResult>& conditions) {
  std::vector<CheckResult> i, ii;
  for (const auto& c : conditions) (c.name == "condition (i)" ? i : ii).push_back(c);
  r.condition_i = merged("condition (i)", i);
  r.condition_ii = merged("condition (ii)", ii);
}

bool conditions_hold(const Report& r) {
  return r.condition_i && r.condition_ii && !r.condition_i->failed() && !r.condition_ii->failed();
}

// Symbolic pieces shared by both evaluation modes.
struct Prepared {
  SamplingConfig cfg;
  Stage<Expr> stage;
  ExpMode mode = ExpMode::structural();
};

Prepared prepare(Command cmd, const StructureFile& file, const RunOptions& opts, Report& report) {
  Prepared p;
  p.cfg = sampling_for(file, opts);
  const Expr det = determinant(file.frame);
  SamplingConfig plain = p.cfg;
  plain.guards.clear();
  ZeroVerdict v;
  try {
    v = is_zero(det, plain);
  } catch (const SamplingError& e) {
    throw InputError(std::string("frame determinant cannot be evaluated: ") + e.what());
  }
  if (!is_nonzero(v)) throw InputError("frame is degenerate: det F = " + to_string(det));
  p.cfg.guards.push_back(det);

  auto patch = std::make_shared<const FramedPatch<Expr>>(Calculus<Expr>{file.ctx}, file.frame);
  try {
    p.stage.s = make_structure(patch, file.metric, file.J);
  } catch (const SingularMatrixError&) {
    throw InputError("metric is singular");
  }
  p.stage.frame = identity<Expr>(file.dimension);
  if (opts.adapt_frame && cmd != Command::Validate) {
    p.stage.frame = adapt_frame(p.stage.s);
    report.notes.push_back("frame adapted by Gram-Schmidt");
  }

  if (cmd == Command::Twist || cmd == Command::Verify) {
    if (!file.twist) throw InputError("command needs a [twist] section");
    const TwistSpec& spec = *file.twist;
    p.mode = opts.exp_mode.value_or(spec.mode);
    report.exp_mode = p.mode.to_string();
    if (spec.f) {
      p.stage.x = hamiltonian_vf(*spec.f, p.stage.s);
      p.stage.psi_tilde = lie_derivative_J(*p.stage.x, p.stage.s);
      switch (p.mode.kind) {
        case ExpMode::Kind::Structural:
          try {
            p.stage.twist = exp_structural(*p.stage.psi_tilde, p.cfg);
          } catch (const StructuralExpError& e) {
            throw InputError(std::string(e.what()) + "; use --exp-mode series:K or numeric");
          }
          break;
        case ExpMode::Kind::Series:
          p.stage.twist = exp_series(*p.stage.psi_tilde, p.mode.order);
          break;
        case ExpMode::Kind::NumericOnly:
          break;
      }
    } else {
      p.stage.twist = TwistMap<Expr>{*spec.psi, *spec.psi_inv, false};
      report.exp_mode = p.mode.kind == ExpMode::Kind::NumericOnly ? "numeric" : "explicit";
    }
    if (p.stage.twist && p.stage.twist->approximate) {
      report.approximate = true;
      report.notes.push_back("psi is a truncated series; exact identities hold only up to the truncation error");
    }
  }
  return p;
}

void symbolic(Command cmd, const Prepared& p, Report& report) {
  TheoremResiduals<Expr> rs;
  const Outputs<Expr> o = collect(cmd, p.stage, rs);
  report.checks = decide(rs.checks, p.cfg);
  report.checks.push_back(check_positive("metric positive definite", leading_minors(p.stage.s.g), p.cfg));
  if (cmd == Command::ChernRicci || cmd == Command::Verify) {
    report.im_trace = strings(o.im_trace);
    report.rho = upper_triangle(o.rho);
  }
  if (p.stage.twist && (cmd == Command::Twist || cmd == Command::Verify)) {
    report.psi = strings(p.stage.twist->psi);
    report.psi_inv = strings(p.stage.twist->psi_inv);
  }
  if (cmd != Command::Verify) return;
  report.eta_p = strings(o.eta);
  report.s1 = strings(o.s1);
  report.im_trace_twisted = strings(o.im_trace_twisted);
  report.rho_twisted = upper_triangle(o.rho_twisted);
  set_conditions(report, decide(rs.conditions, p.cfg));
  if (conditions_hold(report)) {
    for (auto& c : decide(rs.branch, p.cfg)) report.checks.push_back(std::move(c));
  } else {
    report.notes.push_back("conditions (i)-(ii) do not both hold; S2 is kept");
  }
}

// Everything is re-evaluated on jets at each sample point; psi is exp(psi~)
// by scaling and squaring there.
void numeric(Command cmd, const Prepared& p, const StructureFile& file, Report& report) {
  const SamplingConfig& cfg = p.cfg;
  const Context& ctx = file.ctx;
  const JetSpace space(ctx.dim(), 3);
  const Stage<Expr>& sym = p.stage;
  const Mat<Expr>& coframe = sym.s.patch->coframe();

  NumericEvidence checks(cfg.tol), conditions(cfg.tol), branch(cfg.tol);
  PointSampler sampler(ctx.symbols(), cfg);
  Point pt;
  int valid = 0, skipped = 0;
  while (valid < cfg.samples && sampler.next(pt)) {
    Stage<Jet> st;
    try {
      auto patch = std::make_shared<const FramedPatch<Jet>>(Calculus<Jet>{}, to_jets(file.frame, pt, ctx, space),
                                                            to_jets(coframe, pt, ctx, space));
      st.s = make_structure(patch, to_jets(sym.s.g, pt, ctx, space), to_jets(sym.s.J, pt, ctx, space));
      st.frame = to_jets(sym.frame, pt, ctx, space);
      if (sym.psi_tilde) {
        st.x = Vec<Jet>(to_jets(Mat<Expr>(*sym.x), pt, ctx, space));
        st.psi_tilde = to_jets(*sym.psi_tilde, pt, ctx, space);
        st.twist = exp_numeric(*st.psi_tilde);
      } else {
        st.twist = TwistMap<Jet>{to_jets(sym.twist->psi, pt, ctx, space), to_jets(sym.twist->psi_inv, pt, ctx, space),
                                 false};
      }
    } catch (const EvalError&) {
      ++skipped;
      continue;
    } catch (const SingularMatrixError&) {
      ++skipped;
      continue;
    }
    TheoremResiduals<Jet> rs;
    collect(cmd, st, rs);
    checks.add(rs.checks, pt);
    conditions.add(rs.conditions, pt);
    branch.add(rs.branch, pt);
    ++valid;
  }
  report.numeric_points = valid;
  if (skipped > 0) report.notes.push_back(std::to_string(skipped) + " sample points skipped (undefined)");
  if (valid < cfg.min_valid) {
    checks.add_failure("numeric sampling", "only " + std::to_string(valid) + " valid points");
  }
  report.checks = checks.results();
  report.checks.push_back(check_positive("metric positive definite", leading_minors(sym.s.g), cfg));
  report.notes.push_back("numeric-only: psi has no closed form, so forms are not printed");
  if (cmd != Command::Verify) return;
  set_conditions(report, conditions.results());
  if (conditions_hold(report)) {
    for (auto& c : branch.results()) report.checks.push_back(std::move(c));
  } else {
    report.notes.push_back("conditions (i)-(ii) do not both hold; S2 is kept");
  }
}

}  // namespace

SamplingConfig sampling_for(const StructureFile& file, const RunOptions& opts) {
  SamplingConfig cfg;
  file.sampling.apply_to(cfg);
  opts.sampling.apply_to(cfg);
  return cfg;
}

Report run_command(const std::string& name, const StructureFile& file, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const Command cmd = command_of(name);
  Report report;
  report.command = name;
  const Prepared p = prepare(cmd, file, opts, report);
  const bool jets = (cmd == Command::Twist || cmd == Command::Verify) && p.mode.kind == ExpMode::Kind::NumericOnly;
  if (jets) {
    numeric(cmd, p, file, report);
  } else {
    symbolic(cmd, p, report);
  }
  report.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace akg
