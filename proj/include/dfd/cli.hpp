#ifndef DFD_CLI_HPP
#define DFD_CLI_HPP

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfd/bisubmodular.hpp"
#include "dfd/core.hpp"
#include "dfd/fenchel.hpp"
#include "dfd/fixtures.hpp"
#include "dfd/generators.hpp"
#include "dfd/integral_convexity.hpp"
#include "dfd/io.hpp"
#include "dfd/rational_fm.hpp"
#include "dfd/separable.hpp"
#include "dfd/subdifferential.hpp"

namespace dfd::cli {

using io::json;

inline int exitCodeFor(const Error& e) {
  const std::string& k = e.kind();
  if (k == "ParseError") return 3;
  if (k == "NotIntegrallyConvex" || k == "InternalInfeasible") return 4;
  if (k == "EmptyIntersection" || k == "InfeasiblePrecondition" ||
      k == "PointOutsideDomain" || k == "BoxTooSmall" ||
      k == "UnboundedRegion" || k == "UnboundedEnumeration" ||
      k == "UnsupportedDimension" || k == "OppositeInfinities" ||
      k == "InvalidBox" || k == "InvalidPiece")
    return 2;
  return 4;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

inline void emitReport(const json& report, std::ostream& out,
                       const std::string& outputPath) {
  const std::string text = report.dump(2);
  out << text << "\n";
  if (!outputPath.empty()) {
    std::ofstream f(outputPath);
    if (!f) throw Error("IoError", "cannot write " + outputPath);
    f << text << "\n";
  }
}

// ---------------------------------------------------------------------------
// Command bodies (each returns the report and the exit code)
// ---------------------------------------------------------------------------

inline std::pair<json, int> runCheckIC(const io::Instance& ins) {
  if (!ins.table) throw ParseError("check-ic needs a table");
  Clock clock;
  FunctionConvexityResult res = isIntegrallyConvexFunction(*ins.table);
  json rep;
  rep["command"] = "check-ic";
  rep["status"] = res.integrallyConvex ? "integrally_convex"
                                       : "not_integrally_convex";
  if (res.witness) {
    rep["witness"] = {
        {"x", io::pointToJson(res.witness->x)},
        {"y", io::pointToJson(res.witness->y)},
        {"midpoint", io::ratVecToJson(res.witness->midpointZ)},
        {"extension_value", io::extRatToJson(res.witness->extensionValue)}};
  }
  rep["timing_ms"] = clock.ms();
  return {rep, 0};
}

inline std::pair<json, int> runMinimize(const io::Instance& ins) {
  if (!ins.table) throw ParseError("minimize needs a table");
  Clock clock;
  json rep;
  rep["command"] = "minimize";
  Minimizer m = ins.separable ? minimizeDifference(*ins.table, *ins.separable)
                              : Minimizer{[&] {
                                  // plain table minimum = f - 0
                                  std::optional<Minimizer> best;
                                  for (const auto& [x, v] : ins.table->entries())
                                    if (!best || v < best->value)
                                      best = Minimizer{x, v};
                                  return best->point;
                                }(),
                                          0};
  if (!ins.separable) {
    m.value = ins.table->at(m.point);
  }
  rep["status"] = "ok";
  rep["minimizer"] = io::pointToJson(m.point);
  rep["value"] = io::intToJson(m.value);
  rep["local_minimum"] = localMinimumCheck(*ins.table, m.point);
  rep["timing_ms"] = clock.ms();
  return {rep, 0};
}

inline std::pair<json, int> runConjugate(const io::Instance& ins) {
  if (!ins.point) throw ParseError("conjugate needs a point");
  Clock clock;
  json rep;
  rep["command"] = "conjugate";
  rep["point"] = io::pointToJson(*ins.point);
  if (ins.table) {
    rep["kind"] = "table_convex";
    rep["value"] = io::intToJson(ins.table->conjugate(*ins.point));
  } else if (ins.separable) {
    if (ins.separable->orientation() == Orientation::Concave) {
      rep["kind"] = "separable_concave";
      rep["value"] =
          io::extIntToJson(concaveConjugateSeparable(*ins.separable, *ins.point));
    } else {
      rep["kind"] = "separable_convex";
      rep["value"] =
          io::extIntToJson(convexConjugateSeparable(*ins.separable, *ins.point));
    }
  } else {
    throw ParseError("conjugate needs a table or a separable function");
  }
  rep["status"] = "ok";
  rep["timing_ms"] = clock.ms();
  return {rep, 0};
}

inline std::pair<json, int> runSubdiff(const io::Instance& ins) {
  if (!ins.table || !ins.point)
    throw ParseError("subdiff needs a table and a point");
  const TableFunction& f = *ins.table;
  const LatticePoint& x = *ins.point;
  const IntegralBox box =
      ins.box ? *ins.box : IntegralBox::trivial(f.dimension());
  Clock clock;

  json rep;
  rep["command"] = "subdiff";
  InequalitySystem sys = buildSubgradientSystem(f, x);
  json rows = json::array();
  for (const SignedRow& r : sys.rows)
    rows.push_back(json::array({io::pointToJson(r.a), io::intToJson(r.b)}));
  rep["system"] = {{"rows", std::move(rows)}};

  // Back-substitution trace: intervals for l = n..1 with the chosen values.
  const std::size_t n = f.dimension();
  json intervals = json::array();
  int exitCode = 0;
  std::optional<LatticePoint> extracted;
  try {
    LatticePoint p(n, Int(0));
    bool empty = false;
    for (std::size_t l = n; l-- > 0;) {
      IQSystem iq = buildIQ(sys, box, l);
      RatVec tail;
      for (std::size_t j = l + 1; j < n; ++j) tail.push_back(Rat(p[j]));
      auto [lo, hi] = projectionInterval(iq, tail);
      json iv;
      iv["level"] = l + 1;
      iv["lower"] = io::extRatToJson(lo);
      iv["upper"] = io::extRatToJson(hi);
      if (hi < lo) {
        if (l + 1 == n) {
          iv["chosen"] = nullptr;
          intervals.push_back(std::move(iv));
          empty = true;
          break;
        }
        throw NotIntegrallyConvex("empty interval during back-substitution");
      }
      ExtRat chosen = lo.isFinite() ? lo : (hi.isFinite() ? hi : ExtRat(Rat(0)));
      if (!isIntegral(chosen.value()))
        throw NotIntegrallyConvex("fractional interval endpoint");
      p[l] = boost::multiprecision::numerator(chosen.value());
      iv["chosen"] = io::intToJson(p[l]);
      intervals.push_back(std::move(iv));
    }
    if (empty) {
      rep["status"] = "empty";
      rep["subgradient"] = nullptr;
    } else if (!membershipCheck(f, x, toRatVec(p)) || !box.contains(p)) {
      throw NotIntegrallyConvex("extracted point fails the membership check");
    } else {
      rep["status"] = "ok";
      rep["subgradient"] = io::pointToJson(p);
      extracted = p;
    }
  } catch (const NotIntegrallyConvex& e) {
    rep["status"] = "no_integral_subgradient";
    rep["subgradient"] = nullptr;
    rep["note"] = std::string("NotIntegrallyConvex: ") + e.what();
    exitCode = 4;
  }
  rep["iq_intervals"] = std::move(intervals);

  InequalitySystem combined(sys.dimension, sys.rows, box);
  try {
    std::vector<RatVec> verts = enumerateVertices(combined);
    json pts = json::array(), flags = json::array();
    for (const RatVec& v : verts) {
      pts.push_back(io::ratVecToJson(v));
      flags.push_back(isIntegral(v));
    }
    rep["vertices"] = {{"bounded", true},
                       {"points", std::move(pts)},
                       {"integral_flags", std::move(flags)}};
  } catch (const UnboundedRegion&) {
    rep["vertices"] = {{"bounded", false}};
  }

  rep["timing_ms"] = clock.ms();
  return {rep, exitCode};
}

inline std::pair<json, int> runFenchel(const io::Instance& ins) {
  if (!ins.table) throw ParseError("fenchel needs a table");
  Clock clock;
  json rep;
  rep["command"] = "fenchel";

  const bool noIC =
      std::find(ins.flags.begin(), ins.flags.end(), "no_ic_assumption") !=
      ins.flags.end();
  if (noIC || ins.tableG) {
    if (!ins.tableG) throw ParseError("gap report needs table_g");
    const std::size_t n = ins.table->dimension();
    IntegralBox dualBox = ins.dualBox
                              ? *ins.dualBox
                              : IntegralBox(std::vector<ExtInt>(n, ExtInt(-3)),
                                            std::vector<ExtInt>(n, ExtInt(3)));
    const bool exactTables =
        std::find(ins.flags.begin(), ins.flags.end(), "exact_tables") !=
        ins.flags.end();
    GapReport gap =
        counterexampleGapReport(*ins.table, *ins.tableG, dualBox, !exactTables);
    rep["status"] = "gap_report";
    rep["chain"] = {{"min_discrete", io::extRatToJson(gap.minDiscrete)},
                    {"min_continuous", io::extRatToJson(gap.minContinuous)},
                    {"max_continuous", io::extRatToJson(gap.maxContinuous)},
                    {"max_discrete", io::extRatToJson(gap.maxDiscrete)}};
    if (gap.maxDiscreteWitness)
      rep["max_discrete_witness"] = io::pointToJson(*gap.maxDiscreteWitness);
    rep["timing_ms"] = clock.ms();
    return {rep, 0};
  }

  if (!ins.separable || ins.separable->orientation() != Orientation::Concave)
    throw ParseError("fenchel needs a concave separable function");
  DualityCertificate cert = fenchelCertificate(*ins.table, *ins.separable);
  rep["status"] = "certificate";
  rep["certificate"] = {
      {"primal_point", io::pointToJson(cert.primalPoint)},
      {"dual_point", io::pointToJson(cert.dualPoint)},
      {"primal_value", io::intToJson(cert.primalValue)},
      {"dual_value", io::intToJson(cert.dualValue)},
      {"conjugate_f", io::intToJson(cert.conjugateF)},
      {"conjugate_psi", io::intToJson(cert.conjugatePsi)},
      {"argmax_verified", cert.argmaxVerified},
      {"argmin_verified", cert.argminVerified}};
  rep["timing_ms"] = clock.ms();
  return {rep, 0};
}

inline std::pair<json, int> runBisub(const io::Instance& ins,
                                     const std::string& op) {
  if (!ins.bisub) throw ParseError("bisub needs a bisub table");
  const BisubFunction& f = *ins.bisub;
  const std::size_t n = f.groundSetSize();
  Clock clock;
  json rep;
  rep["command"] = "bisub";
  rep["op"] = op;

  auto maskOf = [&](const char* key) -> std::uint32_t {
    if (!ins.raw.contains(key)) throw ParseError(std::string("bisub ") + op +
                                                 " needs " + key);
    std::uint32_t m = 0;
    for (const auto& e : ins.raw.at(key)) {
      const long i = e.is_string() ? std::stol(e.get<std::string>())
                                   : e.get<long>();
      if (i < 1 || static_cast<std::size_t>(i) > n)
        throw ParseError(std::string(key) + ": element out of range");
      m |= 1u << (i - 1);
    }
    return m;
  };
  auto pointOf = [&](const char* key) {
    if (!ins.raw.contains(key))
      throw ParseError(std::string("bisub ") + op + " needs " + key);
    LatticePoint p = io::parsePoint(ins.raw.at(key), key);
    if (p.size() != n) throw ParseError(std::string(key) + ": dimension");
    return p;
  };
  auto pairJson = [&](const SignedPair& s) {
    json X = json::array(), Y = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      if (s.X >> i & 1u) X.push_back(static_cast<int>(i + 1));
      if (s.Y >> i & 1u) Y.push_back(static_cast<int>(i + 1));
    }
    return json::array({std::move(X), std::move(Y)});
  };

  if (op == "cgk") {
    MinMaxResult r = minmaxCGK(f, pointOf("w"));
    rep["status"] = "ok";
    rep["lhs"] = io::intToJson(r.lhs);
    rep["rhs"] = io::intToJson(r.rhs);
    rep["equal"] = r.lhs == r.rhs;
    rep["lhs_witness"] = io::pointToJson(r.lhsWitness);
    rep["rhs_witness"] = pairJson(r.rhsWitness);
  } else if (op == "fp") {
    MinMaxResult r = minmaxFP(f, pointOf("alpha"), pointOf("beta"),
                              maskOf("A"), maskOf("B"));
    rep["status"] = "ok";
    rep["lhs"] = io::intToJson(r.lhs);
    rep["rhs"] = io::intToJson(r.rhs);
    rep["equal"] = r.lhs == r.rhs;
    rep["lhs_witness"] = io::pointToJson(r.lhsWitness);
    rep["rhs_witness"] = pairJson(r.rhsWitness);
  } else if (op == "conv") {
    BisubFunction conv = boxConvolution(f, pointOf("alpha"), pointOf("beta"));
    rep["status"] = "ok";
    rep["convolution"] = io::bisubToJson(conv);
    rep["bisubmodular"] = !isBisubmodular(conv).has_value();
  } else {
    throw ParseError("bisub op must be cgk, fp or conv");
  }
  rep["timing_ms"] = clock.ms();
  return {rep, 0};
}

// ---------------------------------------------------------------------------
// verify: re-validation of an emitted report via membership and evaluation
// ---------------------------------------------------------------------------

inline std::pair<json, int> runVerify(const io::Instance& ins,
                                      const std::string& reportPath) {
  std::ifstream in(reportPath);
  if (!in) throw ParseError("cannot open report " + reportPath);
  json report;
  try {
    report = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
  const std::string command = report.value("command", "");
  json rep;
  rep["command"] = "verify";
  rep["verified_command"] = command;
  Clock clock;

  auto fail = [&](const std::string& why) -> std::pair<json, int> {
    rep["status"] = "invalid";
    rep["reason"] = why;
    rep["timing_ms"] = clock.ms();
    return {rep, 4};
  };
  auto pass = [&]() -> std::pair<json, int> {
    rep["status"] = "verified";
    rep["timing_ms"] = clock.ms();
    return {rep, 0};
  };

  if (command == "fenchel" && report.value("status", "") == "certificate") {
    if (!ins.table || !ins.separable) throw ParseError("verify needs the instance");
    const json& c = report.at("certificate");
    LatticePoint xs = io::parsePoint(c.at("primal_point"), "primal_point");
    LatticePoint ps = io::parsePoint(c.at("dual_point"), "dual_point");
    Int primal = io::parseInt(c.at("primal_value"), "primal_value");
    Int dual = io::parseInt(c.at("dual_value"), "dual_value");
    ExtInt fx = (*ins.table)(xs);
    ExtInt px = (*ins.separable)(xs);
    if (!fx.isFinite() || !px.isFinite()) return fail("x* outside a domain");
    if (fx.value() - px.value() != primal) return fail("primal value mismatch");
    if (primal != dual) return fail("primal != dual");
    // argmax membership: <p*,x*> - f(x*) >= <p*,y> - f(y) for all y.
    const Int lhs = dot(ps, xs) - fx.value();
    for (const auto& [y, v] : ins.table->entries())
      if (dot(ps, y) - v > lhs) return fail("argmax membership fails");
    // argmin membership via the exact conjugate identity.
    ExtInt psiConj = concaveConjugateSeparable(*ins.separable, ps);
    if (!psiConj.isFinite() ||
        psiConj.value() != dot(ps, xs) - px.value())
      return fail("argmin membership fails");
    return pass();
  }

  if (command == "subdiff") {
    if (!ins.table || !ins.point) throw ParseError("verify needs the instance");
    if (report.value("status", "") == "ok") {
      LatticePoint p = io::parsePoint(report.at("subgradient"), "subgradient");
      if (!membershipCheck(*ins.table, *ins.point, toRatVec(p)))
        return fail("subgradient membership fails");
      const IntegralBox box = ins.box
                                  ? *ins.box
                                  : IntegralBox::trivial(ins.table->dimension());
      if (!box.contains(p)) return fail("subgradient outside the box");
      return pass();
    }
    return pass();  // "empty" and error statuses carry nothing to recheck
  }

  if (command == "minimize") {
    if (!ins.table) throw ParseError("verify needs the instance");
    LatticePoint m = io::parsePoint(report.at("minimizer"), "minimizer");
    Int value = io::parseInt(report.at("value"), "value");
    ExtInt fm = (*ins.table)(m);
    if (!fm.isFinite()) return fail("minimizer outside dom f");
    if (ins.separable) {
      ExtInt pm = (*ins.separable)(m);
      if (!pm.isFinite() || fm.value() - pm.value() != value)
        return fail("value mismatch");
      for (const auto& [x, v] : ins.table->entries()) {
        ExtInt px = (*ins.separable)(x);
        if (px.isFinite() && v - px.value() < value)
          return fail("a better point exists");
      }
    } else {
      if (fm.value() != value) return fail("value mismatch");
      for (const auto& [x, v] : ins.table->entries())
        if (v < value) return fail("a better point exists");
    }
    return pass();
  }

  if (command == "check-ic") {
    if (!ins.table) throw ParseError("verify needs the instance");
    if (report.value("status", "") == "not_integrally_convex" &&
        report.contains("witness")) {
      const json& w = report.at("witness");
      LatticePoint x = io::parsePoint(w.at("x"), "x");
      LatticePoint y = io::parsePoint(w.at("y"), "y");
      ExtInt fx = (*ins.table)(x), fy = (*ins.table)(y);
      if (!fx.isFinite() || !fy.isFinite()) return fail("witness outside dom");
      ExtRat mid = localExtension(*ins.table, midpoint(x, y));
      ExtRat bound((Rat(fx.value()) + Rat(fy.value())) / 2);
      if (mid <= bound) return fail("witness does not violate the inequality");
    }
    return pass();
  }

  if (command == "bisub") {
    if (!ins.bisub) throw ParseError("verify needs the instance");
    const std::string op = report.value("op", "");
    if (op == "cgk" || op == "fp") {
      Int lhs = io::parseInt(report.at("lhs"), "lhs");
      Int rhs = io::parseInt(report.at("rhs"), "rhs");
      if (lhs != rhs) return fail("lhs != rhs");
      LatticePoint z = io::parsePoint(report.at("lhs_witness"), "lhs_witness");
      if (!polyhedronMembership(*ins.bisub, toRatVec(z)))
        return fail("lhs witness outside P(f)");
      return pass();
    }
    if (op == "conv") {
      BisubFunction conv = io::parseBisub(report.at("convolution"), "convolution");
      if (isBisubmodular(conv)) return fail("convolution not bisubmodular");
      return pass();
    }
  }

  return fail("unknown or unverifiable report");
}

// ---------------------------------------------------------------------------
// gen: fixture and generator-backed instance files
// ---------------------------------------------------------------------------

inline std::pair<json, int> runGen(const std::string& kind, std::uint64_t seed,
                                   std::size_t n, long radius) {
  io::Instance ins;
  if (kind == "ex49") {
    ins.dimension = 2;
    ins.table = fixtures::ex49();
    ins.box = fixtures::ex49Box();
    ins.point = LatticePoint{0, 0};
  } else if (kind == "r45") {
    ins.dimension = 3;
    ins.table = fixtures::r45();
    ins.point = LatticePoint{0, 0, 0};
  } else if (kind == "r46") {
    ins.dimension = 3;
    ins.table = fixtures::r46();
    ins.point = LatticePoint{0, 0, 0};
  } else if (kind == "r47") {
    ins.dimension = 3;
    ins.table = fixtures::r47();
    ins.point = LatticePoint{0, 0, 0};
  } else if (kind == "e35" || kind == "e36") {
    auto [f, g] = kind == "e35" ? fixtures::e35() : fixtures::e36();
    ins.dimension = 2;
    ins.table = f;
    ins.tableG = g;
    ins.flags = {"no_ic_assumption"};
    ins.dualBox = IntegralBox(std::vector<ExtInt>(2, ExtInt(-3)),
                              std::vector<ExtInt>(2, ExtInt(3)));
  } else if (kind == "2sep") {
    TwoSeparableSpec spec;
    spec.dimension = n;
    spec.boxRadius = radius;
    ins.dimension = n;
    ins.table = generate2Separable(seed, spec);
  } else if (kind == "quad") {
    ins.dimension = n;
    ins.table = generateDiagonallyDominantQuadratic(seed, n, radius);
  } else if (kind == "bisub") {
    ins.dimension = n;
    ins.bisub = generateBisubmodularByRejection(seed, n);
  } else {
    throw ParseError("unknown gen kind " + kind);
  }
  return {io::instanceToJson(ins), 0};
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Exact discrete Fenchel duality toolkit"};
  app.require_subcommand(1);

  std::string instancePath, outputPath, reportPath;
  std::uint64_t seed = 1;
  app.add_option("--instance", instancePath, "Instance file (JSON)");
  app.add_option("--output", outputPath, "Write the report here as well");
  app.add_option("--seed", seed, "Seed for generator-backed commands");
  app.fallthrough();

  CLI::App* checkIC = app.add_subcommand("check-ic", "Integral convexity check");
  CLI::App* minimize = app.add_subcommand("minimize", "Exact minimization");
  CLI::App* conjugate = app.add_subcommand("conjugate", "Integral conjugates");
  CLI::App* subdiff =
      app.add_subcommand("subdiff", "Subdifferential system and extraction");
  CLI::App* fenchel =
      app.add_subcommand("fenchel", "Duality certificate or gap report");
  CLI::App* bisub = app.add_subcommand("bisub", "Bisubmodular min-max checks");
  std::string bisubOp = "cgk";
  bisub->add_option("--op", bisubOp, "cgk | fp | conv");
  CLI::App* verify = app.add_subcommand("verify", "Re-validate a report");
  verify->add_option("--report", reportPath, "Report file to verify")
      ->required();
  CLI::App* gen = app.add_subcommand("gen", "Emit fixture/generated instances");
  std::string genKind;
  std::size_t genN = 2;
  long genRadius = 2;
  gen->add_option("--kind", genKind,
                  "ex49|r45|r46|r47|e35|e36|2sep|quad|bisub")
      ->required();
  gen->add_option("--n", genN, "Dimension / ground set size");
  gen->add_option("--radius", genRadius, "Box radius for tabulation");

  std::vector<const char*> argv;
  argv.push_back("dfd");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "argument error: " << e.what() << "\n";
    return 3;
  }

  auto loadIns = [&]() {
    if (instancePath.empty()) throw ParseError("--instance is required");
    return io::loadInstance(instancePath);
  };

  try {
    std::pair<json, int> result;
    if (checkIC->parsed())
      result = runCheckIC(loadIns());
    else if (minimize->parsed())
      result = runMinimize(loadIns());
    else if (conjugate->parsed())
      result = runConjugate(loadIns());
    else if (subdiff->parsed())
      result = runSubdiff(loadIns());
    else if (fenchel->parsed())
      result = runFenchel(loadIns());
    else if (bisub->parsed())
      result = runBisub(loadIns(), bisubOp);
    else if (verify->parsed())
      result = runVerify(loadIns(), reportPath);
    else if (gen->parsed())
      result = runGen(genKind, seed, genN, genRadius);
    else
      throw ParseError("no subcommand");
    emitReport(result.first, out, outputPath);
    return result.second;
  } catch (const Error& e) {
    err << e.what() << "\n";
    json rep;
    rep["status"] = "error";
    rep["error_kind"] = e.kind();
    rep["message"] = e.what();
    emitReport(rep, out, outputPath);
    return exitCodeFor(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace dfd::cli

#endif  // DFD_CLI_HPP
