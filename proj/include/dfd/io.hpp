#ifndef DFD_IO_HPP
#define DFD_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dfd/bisubmodular.hpp"
#include "dfd/core.hpp"
#include "dfd/separable.hpp"
#include "dfd/table_function.hpp"

namespace dfd::io {

using nlohmann::json;

// All numeric payloads travel as decimal strings ("-12"), rationals as
// "num/den", infinities as "-inf"/"+inf". Plain JSON numbers are accepted on
// input for convenience; output is always canonical strings.

inline Int parseInt(const json& j, const std::string& ctx) {
  try {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(ctx + ": " + e.what());
  }
  throw ParseError(ctx + ": expected an integer");
}

inline ExtInt parseExtInt(const json& j, const std::string& ctx) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return ExtInt::minusInfinity();
    if (s == "+inf" || s == "inf") return ExtInt::plusInfinity();
  }
  return ExtInt(parseInt(j, ctx));
}

inline Rat parseRat(const json& j, const std::string& ctx) {
  try {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      const auto slash = s.find('/');
      if (slash == std::string::npos) return Rat(Int(s));
      Int num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den <= 0) throw ParseError(ctx + ": denominator must be positive");
      return Rat(num) / Rat(den);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(ctx + ": " + e.what());
  }
  throw ParseError(ctx + ": expected an integer or num/den string");
}

inline LatticePoint parsePoint(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array");
  LatticePoint p;
  for (const auto& c : j) p.push_back(parseInt(c, ctx));
  return p;
}

inline RatVec parseRatVec(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ParseError(ctx + ": expected an array");
  RatVec p;
  for (const auto& c : j) p.push_back(parseRat(c, ctx));
  return p;
}

inline json intToJson(const Int& v) { return v.str(); }

inline json extIntToJson(const ExtInt& v) { return v.str(); }

inline json ratToJson(const Rat& v) {
  const Int num = boost::multiprecision::numerator(v);
  const Int den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline json extRatToJson(const ExtRat& v) {
  if (!v.isFinite()) return v.isPlusInfinity() ? "+inf" : "-inf";
  return ratToJson(v.value());
}

inline json pointToJson(const LatticePoint& p) {
  json a = json::array();
  for (const Int& c : p) a.push_back(intToJson(c));
  return a;
}

inline json ratVecToJson(const RatVec& p) {
  json a = json::array();
  for (const Rat& c : p) a.push_back(ratToJson(c));
  return a;
}

// ---------------------------------------------------------------------------
// TableFunction
// ---------------------------------------------------------------------------

inline TableFunction parseTable(const json& j, const std::string& ctx,
                                std::size_t dimension) {
  if (!j.is_array()) throw ParseError(ctx + ": expected a list of entries");
  std::map<LatticePoint, Int> entries;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError(ctx + ": each entry is [point, value]");
    LatticePoint x = parsePoint(entry[0], ctx + " point");
    if (x.size() != dimension) throw ParseError(ctx + ": point dimension");
    entries[std::move(x)] = parseInt(entry[1], ctx + " value");
  }
  if (entries.empty()) throw ParseError(ctx + ": empty table");
  return TableFunction(dimension, std::move(entries));
}

inline json tableToJson(const TableFunction& f) {
  json a = json::array();
  for (const auto& [x, v] : f.entries())  // map order: sorted points
    a.push_back(json::array({pointToJson(x), intToJson(v)}));
  return a;
}

// ---------------------------------------------------------------------------
// SeparableFunction
// ---------------------------------------------------------------------------

inline UnivariatePiece parsePiece(const json& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("shape"))
    throw ParseError(ctx + ": piece needs a shape");
  const std::string shape = j.at("shape").get<std::string>();
  const json params = j.value("params", json::object());

  auto param = [&](const char* name) -> Int {
    if (!params.contains(name))
      throw ParseError(ctx + ": missing param " + name);
    return parseInt(params.at(name), ctx + std::string(" param ") + name);
  };

  UnivariatePiece piece = [&]() {
    if (shape == "abs_form")
      return UnivariatePiece::absForm(param("alpha"), param("k0"));
    if (shape == "quad_form")
      return UnivariatePiece::quadForm(param("beta"), param("k0"));
    if (shape == "linear_form")
      return UnivariatePiece::linearForm(param("slope"));
    if (shape == "kink_form")
      return UnivariatePiece::kinkForm(param("slope_left"),
                                       param("slope_right"), param("k0"));
    if (shape == "breakpoints") {
      if (!params.contains("start") || !params.contains("values"))
        throw ParseError(ctx + ": breakpoints need start and values");
      Int k = parseInt(params.at("start"), ctx + " start");
      std::map<Int, Int> vals;
      for (const auto& v : params.at("values")) {
        vals[k] = parseInt(v, ctx + " breakpoint value");
        ++k;
      }
      return UnivariatePiece::breakpoints(std::move(vals));
    }
    throw ParseError(ctx + ": unknown shape " + shape);
  }();

  if (j.contains("domain")) {
    if (shape == "breakpoints")
      throw ParseError(ctx + ": breakpoint domain comes from its values");
    const json& d = j.at("domain");
    if (!d.is_array() || d.size() != 2)
      throw ParseError(ctx + ": domain is [lo, hi]");
    piece = piece.withDomain(parseExtInt(d[0], ctx + " domain lo"),
                             parseExtInt(d[1], ctx + " domain hi"));
  }
  return piece;
}

inline SeparableFunction parseSeparable(const json& j, const std::string& ctx,
                                        std::size_t dimension) {
  if (!j.is_object() || !j.contains("orientation") || !j.contains("pieces"))
    throw ParseError(ctx + ": needs orientation and pieces");
  const std::string o = j.at("orientation").get<std::string>();
  if (o != "convex" && o != "concave")
    throw ParseError(ctx + ": orientation is convex or concave");
  std::vector<UnivariatePiece> pieces;
  for (const auto& pj : j.at("pieces"))
    pieces.push_back(parsePiece(pj, ctx + " piece"));
  if (pieces.size() != dimension)
    throw ParseError(ctx + ": one piece per coordinate");
  try {
    return SeparableFunction(
        o == "convex" ? Orientation::Convex : Orientation::Concave,
        std::move(pieces));
  } catch (const InvalidPiece& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

inline json pieceToJson(const UnivariatePiece& p) {
  json j;
  json params;
  switch (p.shape()) {
    case PieceShape::AbsForm:
      j["shape"] = "abs_form";
      params["alpha"] = intToJson(p.paramA());
      params["k0"] = intToJson(p.kinkPoint());
      break;
    case PieceShape::QuadForm:
      j["shape"] = "quad_form";
      params["beta"] = intToJson(p.paramA());
      params["k0"] = intToJson(p.kinkPoint());
      break;
    case PieceShape::LinearForm:
      j["shape"] = "linear_form";
      params["slope"] = intToJson(p.paramA());
      break;
    case PieceShape::KinkForm:
      j["shape"] = "kink_form";
      params["slope_left"] = intToJson(p.paramA());
      params["slope_right"] = intToJson(p.paramB());
      params["k0"] = intToJson(p.kinkPoint());
      break;
    case PieceShape::Breakpoints: {
      j["shape"] = "breakpoints";
      params["start"] = intToJson(p.table().begin()->first);
      json vals = json::array();
      for (const auto& [k, v] : p.table()) vals.push_back(intToJson(v));
      params["values"] = std::move(vals);
      break;
    }
  }
  j["params"] = std::move(params);
  if (p.shape() != PieceShape::Breakpoints &&
      (p.domainLower().isFinite() || p.domainUpper().isFinite()))
    j["domain"] = json::array(
        {extIntToJson(p.domainLower()), extIntToJson(p.domainUpper())});
  return j;
}

inline json separableToJson(const SeparableFunction& f) {
  json j;
  j["orientation"] =
      f.orientation() == Orientation::Convex ? "convex" : "concave";
  json pieces = json::array();
  for (std::size_t i = 0; i < f.dimension(); ++i)
    pieces.push_back(pieceToJson(f.piece(i)));
  j["pieces"] = std::move(pieces);
  return j;
}

// ---------------------------------------------------------------------------
// Boxes and bisubmodular tables
// ---------------------------------------------------------------------------

inline IntegralBox parseBox(const json& j, const std::string& ctx,
                            std::size_t dimension) {
  if (!j.is_object() || !j.contains("lower") || !j.contains("upper"))
    throw ParseError(ctx + ": box needs lower and upper");
  std::vector<ExtInt> lo, hi;
  for (const auto& v : j.at("lower")) lo.push_back(parseExtInt(v, ctx + " lower"));
  for (const auto& v : j.at("upper")) hi.push_back(parseExtInt(v, ctx + " upper"));
  if (lo.size() != dimension || hi.size() != dimension)
    throw ParseError(ctx + ": box dimension");
  try {
    return IntegralBox(std::move(lo), std::move(hi));
  } catch (const Error& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

inline json boxToJson(const IntegralBox& b) {
  json lo = json::array(), hi = json::array();
  for (std::size_t j = 0; j < b.dimension(); ++j) {
    lo.push_back(extIntToJson(b.lower(j)));
    hi.push_back(extIntToJson(b.upper(j)));
  }
  return json{{"lower", std::move(lo)}, {"upper", std::move(hi)}};
}

/// Bisubmodular tables: {"n": k, "values": [ [[X, Y], value], ... ]} where
/// X, Y are 1-based index arrays. Every pair of 3^N must be present (the
/// normalized empty pair may be omitted).
inline BisubFunction parseBisub(const json& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("n") || !j.contains("values"))
    throw ParseError(ctx + ": needs n and values");
  const std::size_t n = j.at("n").get<std::size_t>();
  BisubFunction f(n);
  std::size_t seen = 0;
  for (const auto& entry : j.at("values")) {
    if (!entry.is_array() || entry.size() != 2)
      throw ParseError(ctx + ": each entry is [[X,Y], value]");
    const json& xy = entry[0];
    if (!xy.is_array() || xy.size() != 2)
      throw ParseError(ctx + ": signed pair is [X, Y]");
    auto mask = [&](const json& arr) {
      std::uint32_t m = 0;
      for (const auto& e : arr) {
        const long i = e.is_string() ? std::stol(e.get<std::string>())
                                     : e.get<long>();
        if (i < 1 || static_cast<std::size_t>(i) > n)
          throw ParseError(ctx + ": element out of range");
        m |= 1u << (i - 1);
      }
      return m;
    };
    SignedPair s{mask(xy[0]), mask(xy[1])};
    if (s.X & s.Y) throw ParseError(ctx + ": X and Y must be disjoint");
    f.setValue(s, parseInt(entry[1], ctx + " value"));
    ++seen;
  }
  std::size_t expect = 1;
  for (std::size_t i = 0; i < n; ++i) expect *= 3;
  if (seen != expect && seen != expect - 1)
    throw ParseError(ctx + ": expected all of 3^N (" + std::to_string(expect) +
                     " pairs), got " + std::to_string(seen));
  return f;
}

inline json bisubToJson(const BisubFunction& f) {
  json vals = json::array();
  for (const SignedPair& s : f.allPairs()) {
    json X = json::array(), Y = json::array();
    for (std::size_t i = 0; i < f.groundSetSize(); ++i) {
      if (s.X >> i & 1u) X.push_back(static_cast<int>(i + 1));
      if (s.Y >> i & 1u) Y.push_back(static_cast<int>(i + 1));
    }
    vals.push_back(json::array(
        {json::array({std::move(X), std::move(Y)}), intToJson(f.value(s))}));
  }
  return json{{"n", f.groundSetSize()}, {"values", std::move(vals)}};
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

struct Instance {
  std::size_t dimension = 0;
  std::optional<TableFunction> table;
  std::optional<TableFunction> tableG;  // second table for gap reports
  std::optional<SeparableFunction> separable;
  std::optional<IntegralBox> box;
  std::optional<IntegralBox> dualBox;
  std::optional<BisubFunction> bisub;
  std::optional<LatticePoint> point;
  std::vector<std::string> flags;
  json raw;
};

inline Instance parseInstance(const json& j) {
  if (!j.is_object()) throw ParseError("instance: expected an object");
  Instance ins;
  ins.raw = j;
  if (j.contains("dimension"))
    ins.dimension = static_cast<std::size_t>(
        parseInt(j.at("dimension"), "dimension").convert_to<long long>());
  if (j.contains("bisub")) ins.bisub = parseBisub(j.at("bisub"), "bisub");
  if (ins.dimension == 0 && ins.bisub)
    ins.dimension = ins.bisub->groundSetSize();
  if (ins.dimension == 0) throw ParseError("instance: missing dimension");

  if (j.contains("table"))
    ins.table = parseTable(j.at("table"), "table", ins.dimension);
  if (j.contains("table_g"))
    ins.tableG = parseTable(j.at("table_g"), "table_g", ins.dimension);
  if (j.contains("separable"))
    ins.separable = parseSeparable(j.at("separable"), "separable", ins.dimension);
  if (j.contains("box")) ins.box = parseBox(j.at("box"), "box", ins.dimension);
  if (j.contains("dual_box"))
    ins.dualBox = parseBox(j.at("dual_box"), "dual_box", ins.dimension);
  if (j.contains("point"))
    ins.point = parsePoint(j.at("point"), "point");
  if (j.contains("flags")) {
    if (!j.at("flags").is_array()) throw ParseError("flags: expected an array");
    for (const auto& f : j.at("flags"))
      ins.flags.push_back(f.get<std::string>());
  }
  return ins;
}

inline Instance loadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return parseInstance(j);
}

inline json instanceToJson(const Instance& ins) {
  json j;
  j["dimension"] = intToJson(Int(ins.dimension));
  if (ins.table) j["table"] = tableToJson(*ins.table);
  if (ins.tableG) j["table_g"] = tableToJson(*ins.tableG);
  if (ins.separable) j["separable"] = separableToJson(*ins.separable);
  if (ins.box) j["box"] = boxToJson(*ins.box);
  if (ins.dualBox) j["dual_box"] = boxToJson(*ins.dualBox);
  if (ins.bisub) j["bisub"] = bisubToJson(*ins.bisub);
  if (ins.point) j["point"] = pointToJson(*ins.point);
  if (!ins.flags.empty()) j["flags"] = ins.flags;
  return j;
}

}  // namespace dfd::io

#endif  // DFD_IO_HPP
