#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "hconvex/inversion.hpp"

namespace hconvex {

namespace {

double state_norm(const ComplexField& V) {
  double s = 0.0;
  for (const auto& v : V.values()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

MinimizeResult minimize(const ComplexField& V0, const InversionProblem& P, const DescentSchedule& sched) {
  if (!(sched.gamma0 > 0.0)) throw DomainError("gamma0 must be positive");
  MinimizeResult res;
  res.V = V0;
  P.constraints().apply(res.V);

  double J = 0.0;
  ComplexField G = gradient_J(res.V, P, &J);
  res.J0 = J;
  double gamma = sched.gamma0;
  ComplexField trial = res.V;

  for (std::size_t it = 1; it <= sched.max_iter; ++it) {
    auto& tv = trial.values();
    const auto& cv = res.V.values();
    const auto& gv = G.values();
    for (std::size_t i = 0; i < tv.size(); ++i) tv[i] = cv[i] - gamma * gv[i];
    P.constraints().apply(trial);

    double Jt = 0.0;
    ComplexField Gt = gradient_J(trial, P, &Jt);
    if (!std::isfinite(Jt) || Jt > J) {
      res.trace.push_back({it, gamma, Jt, false, state_norm(res.V)});
      gamma *= 0.5;
      if (gamma < sched.gamma_min) {
        res.reason = StopReason::step_underflow;
        res.J = J;
        return res;
      }
      continue;
    }
    const double dJ = J - Jt;
    std::swap(res.V, trial);
    G = std::move(Gt);
    J = Jt;
    res.trace.push_back({it, gamma, J, true, state_norm(res.V)});
    if (dJ < sched.dj_tol) {
      res.reason = StopReason::small_change;
      res.J = J;
      return res;
    }
  }
  throw NonConvergenceError("descent did not stop within " + std::to_string(sched.max_iter) + " iterations",
                            std::move(res.trace), std::make_shared<const ComplexField>(std::move(res.V)));
}

void save_state(const ComplexField& V, const std::filesystem::path& path) {
  if (!V.all_finite()) throw DomainError("refusing to write a non-finite state");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const auto& g = V.grid();
  out << "n,p,q,s,re,im\n";
  char buf[128];
  for (std::size_t n = 0; n < V.components(); ++n) {
    for (std::size_t node = 0; node < g.size(); ++node) {
      const NodeIndex ix = g.unflat(node);
      const cplx v = V(node, n);
      std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.17g,%.17g\n", n, ix.p, ix.q, ix.s, v.real(), v.imag());
      out << buf;
    }
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

ComplexField load_state(const std::filesystem::path& path, const Grid3D& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("n,p,q,s,re,im", 0) != 0) throw ParseError("expected state header", 1);
  struct Row {
    std::size_t n, p, q, s;
    double re, im;
  };
  std::vector<Row> rows;
  std::size_t N = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    Row r{};
    if (std::sscanf(line.c_str(), "%zu,%zu,%zu,%zu,%lf,%lf", &r.n, &r.p, &r.q, &r.s, &r.re, &r.im) != 6) {
      throw ParseError("malformed state row", line_no);
    }
    if (!std::isfinite(r.re) || !std::isfinite(r.im)) throw ParseError("non-finite value", line_no);
    if (r.p >= grid.nx() || r.q >= grid.ny() || r.s >= grid.nz()) throw ParseError("node outside the grid", line_no);
    N = std::max(N, r.n + 1);
    rows.push_back(r);
  }
  if (rows.size() != N * grid.size()) throw ParseError("state does not cover the grid", 0);
  ComplexField V(grid, N);
  for (const auto& r : rows) V(grid.flat(r.p, r.q, r.s), r.n) = {r.re, r.im};
  return V;
}

void save_trace(const std::vector<TraceEntry>& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "iter,gamma,J,accepted,norm\n";
  char buf[160];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d,%.17g\n", e.iter, e.gamma, e.J, e.accepted ? 1 : 0, e.norm);
    out << buf;
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hconvex
