#pragma once

// Command-line front end. Every subcommand turns its flags (or an --input
// document) into one JSON input object, parses that object strictly into
// typed values, runs the library, and emits a report that echoes the
// canonical input next to the result.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "iwasawa/group_ring.hpp"
#include "iwasawa/lambda_series.hpp"
#include "iwasawa/selmer_ledger.hpp"
#include "iwasawa/selftest.hpp"
#include "iwasawa/structure.hpp"

namespace iwasawa::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "iwasawa";
inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes.
enum Exit : int { kOk = 0, kCheckFailed = 1, kInvalid = 2, kInconclusive = 3 };

// ---------------------------------------------------------------------------
// Document parsing

inline std::string pointer_escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::ParseError, (path.empty() ? std::string("/") : path) + ": " + what);
}

/// Parses JSON text; syntax errors report line and column within `source`.
inline Json parse_document(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (auto colon = msg.rfind(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
    fail(ErrorCode::ParseError,
         source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
  }
}

/// Strict view of a JSON object: every key must be consumed before finish().
class Fields {
 public:
  Fields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) parse_fail(path_, "expected an object");
  }

  const Json* get(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  const Json& need(const std::string& key) {
    const Json* v = get(key);
    if (v == nullptr) parse_fail(at(key), "missing required field");
    return *v;
  }
  std::string at(const std::string& key) const { return path_ + "/" + pointer_escape(key); }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (seen_.count(item.key()) == 0) parse_fail(at(item.key()), "unknown field");
    }
  }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

inline BigInt as_bigint(const Json& v, const std::string& path) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const bool ok = !s.empty() && s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) == std::string::npos &&
                    s != "-";
    if (ok) return BigInt(s);
  }
  parse_fail(path, "expected an integer");
}

inline int as_int(const Json& v, const std::string& path) {
  const BigInt b = as_bigint(v, path);
  if (b > 1000000000 || b < -1000000000) parse_fail(path, "integer out of range");
  return static_cast<int>(b);
}

inline std::uint32_t as_prime(const Json& v, const std::string& path) {
  const BigInt b = as_bigint(v, path);
  require(b >= 2 && b < 1000000 && is_prime(static_cast<std::uint32_t>(b)), ErrorCode::NotPrime,
          path + ": " + b.str() + " is not a supported prime");
  return static_cast<std::uint32_t>(b);
}

inline int as_positive(const Json& v, const std::string& path, const char* what) {
  const int x = as_int(v, path);
  require(x >= 1, ErrorCode::InvalidArgument, path + ": " + what + " must be >= 1");
  return x;
}

inline int as_nonnegative(const Json& v, const std::string& path) {
  const int x = as_int(v, path);
  require(x >= 0, ErrorCode::InvalidArgument, path + ": must be >= 0");
  return x;
}

inline bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) parse_fail(path, "expected true or false");
  return v.get<bool>();
}

inline std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) parse_fail(path, "expected a string");
  return v.get<std::string>();
}

/// An integer, or a string "a" or "a/b".
inline Rational as_rational(const Json& v, const std::string& path) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (auto slash = s.find('/'); slash != std::string::npos) {
      const BigInt num = as_bigint(Json(s.substr(0, slash)), path);
      const BigInt den = as_bigint(Json(s.substr(slash + 1)), path);
      if (den == 0) parse_fail(path, "zero denominator");
      return Rational(num, den);
    }
  }
  return Rational(as_bigint(v, path));
}

inline const Json& as_array(const Json& v, const std::string& path) {
  if (!v.is_array()) parse_fail(path, "expected an array");
  return v;
}

inline std::vector<BigInt> as_bigint_array(const Json& v, const std::string& path) {
  std::vector<BigInt> out;
  const Json& a = as_array(v, path);
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(as_bigint(a[k], path + "/" + std::to_string(k)));
  return out;
}

inline std::vector<Rational> as_rational_array(const Json& v, const std::string& path) {
  std::vector<Rational> out;
  const Json& a = as_array(v, path);
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(as_rational(a[k], path + "/" + std::to_string(k)));
  return out;
}

inline std::vector<int> as_int_array(const Json& v, const std::string& path) {
  std::vector<int> out;
  const Json& a = as_array(v, path);
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(as_int(a[k], path + "/" + std::to_string(k)));
  return out;
}

// ---------------------------------------------------------------------------
// Emitting

inline Json to_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(x);
  }
  return x.str();
}

inline Json to_json(const Rational& x) {
  if (denominator(x) == 1) return to_json(BigInt(numerator(x)));
  return to_string(x);
}

template <typename T>
Json to_json_array(const std::vector<T>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

inline std::vector<BigInt> trimmed(std::vector<BigInt> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

inline std::vector<BigInt> residues(const Poly<PadicInt>& f) {
  std::vector<BigInt> out;
  for (const auto& c : f.coeffs()) out.push_back(c.residue());
  return out;
}

inline Json provenance(const std::string& mode) {
  return Json{{"tool", kToolName}, {"version", kVersion}, {"mode", mode}};
}

/// Result of one task: its report and the exit code it implies.
struct Outcome {
  Json report;
  int exit_code = kOk;
};

inline Json make_report(const std::string& command, Json input, Json result, const std::string& mode) {
  return Json{{"command", command}, {"input", std::move(input)}, {"result", std::move(result)},
              {"provenance", provenance(mode)}};
}

// ---------------------------------------------------------------------------
// Subcommands. Each has a strict parser producing a canonical input object,
// and an executor.

inline LambdaElem parse_series(const Json& v, const std::string& path, std::uint32_t p, int m, int n) {
  const std::vector<BigInt> c = as_bigint_array(v, path);
  require(c.size() <= static_cast<std::size_t>(n), ErrorCode::InvalidArgument,
          path + ": " + std::to_string(c.size()) + " coefficients exceed truncation N=" + std::to_string(n));
  return LambdaElem(p, m, n, c);
}

inline Json series_json(const LambdaElem& f) { return to_json_array(trimmed(f.residues())); }

inline Outcome run_prep(const Json& doc) {
  Fields f(doc, "");
  const std::uint32_t p = as_prime(f.need("p"), f.at("p"));
  const int m = as_positive(f.need("M"), f.at("M"), "M");
  const int n = as_positive(f.need("N"), f.at("N"), "N");
  const LambdaElem series = parse_series(f.need("poly"), f.at("poly"), p, m, n);
  f.finish();

  const WeierstrassForm w = weierstrass_prep(series);
  Json input{{"p", p}, {"M", m}, {"N", n}, {"poly", series_json(series)}};
  Json result{{"mu", w.mu},
              {"lambda", w.lambda()},
              {"P", to_json_array(w.distinguished.coeffs())},
              {"u", series_json(w.unit)},
              {"factor_precision", m - w.mu},
              {"reconstructs", w.reconstruct() == series}};
  return {make_report("prep", std::move(input), std::move(result), "precision"), kOk};
}

inline Outcome run_invariants(const Json& doc) {
  Fields f(doc, "");
  const std::uint32_t p = as_prime(f.need("p"), f.at("p"));
  const int m = as_positive(f.need("M"), f.at("M"), "M");
  const int n = as_positive(f.need("N"), f.at("N"), "N");
  const std::string mpath = f.at("matrix");
  const Json& rows = as_array(f.need("matrix"), mpath);
  f.finish();
  require(!rows.empty(), ErrorCode::DimensionMismatch, mpath + ": empty matrix");

  const LambdaElem zero = LambdaElem::zero(p, m, n);
  std::vector<std::vector<LambdaElem>> entries;
  Json echo = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rpath = mpath + "/" + std::to_string(i);
    const Json& row = as_array(rows[i], rpath);
    require(row.size() == rows.size(), ErrorCode::DimensionMismatch, rpath + ": matrix must be square");
    entries.emplace_back();
    Json echo_row = Json::array();
    for (std::size_t j = 0; j < row.size(); ++j) {
      entries.back().push_back(parse_series(row[j], rpath + "/" + std::to_string(j), p, m, n));
      echo_row.push_back(series_json(entries.back().back()));
    }
    echo.push_back(std::move(echo_row));
  }
  const MatrixInvariants inv = invariants_from_matrix(Matrix<LambdaElem>(entries, zero));
  Json input{{"p", p}, {"M", m}, {"N", n}, {"matrix", std::move(echo)}};
  Json result{{"mu", inv.mu},
              {"lambda", inv.lambda},
              {"char_poly", {{"mu", inv.char_poly.mu},
                             {"coeffs", to_json_array(residues(inv.char_poly.monic))},
                             {"precision", inv.char_poly.monic.zero().precision()}}}};
  return {make_report("invariants", std::move(input), std::move(result), "precision"), kOk};
}

/// κ(γ) for exact twisting: the positive integer itself, held at a precision
/// large enough that its residue is the integer.
inline Character exact_character(std::uint32_t p, const BigInt& kappa, int precision, const std::string& path) {
  require(kappa > 0, ErrorCode::InvalidCharacter, path + ": exact mode needs a positive kappa");
  int m = precision;
  while (ipow(BigInt(p), static_cast<std::uint64_t>(m)) <= kappa) ++m;
  return Character(p, m, kappa);
}

inline Poly<PadicInt> reduce_rational_poly(const std::vector<Rational>& c, std::uint32_t p, int m,
                                           const std::string& path) {
  const PadicInt proto = PadicInt::zero(p, m);
  std::vector<PadicInt> out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const BigInt den = denominator(c[k]);
    require(den % p != 0, ErrorCode::InvalidArgument,
            path + "/" + std::to_string(k) + ": coefficient is not p-integral");
    out.push_back(proto.like(BigInt(numerator(c[k]))) * proto.like(den).inverse());
  }
  return Poly<PadicInt>(out, proto);
}

struct CharPolyInput {
  std::vector<Rational> coeffs;
  bool integral = true;
};

inline CharPolyInput parse_charpoly(const Json& v, const std::string& path) {
  CharPolyInput in{as_rational_array(v, path)};
  while (!in.coeffs.empty() && in.coeffs.back() == 0) in.coeffs.pop_back();
  require(!in.coeffs.empty() && in.coeffs.back() == 1, ErrorCode::InvalidArgument,
          path + ": characteristic polynomial must be monic");
  for (const auto& c : in.coeffs) in.integral &= denominator(c) == 1;
  return in;
}

inline Outcome run_twist(const Json& doc) {
  Fields f(doc, "");
  const std::uint32_t p = as_prime(f.need("p"), f.at("p"));
  const BigInt kappa = as_bigint(f.need("kappa"), f.at("kappa"));
  const int i = as_int(f.need("i"), f.at("i"));
  const std::string cpath = f.at("charpoly");
  const CharPolyInput cp = parse_charpoly(f.need("charpoly"), cpath);
  const Json* mj = f.get("M");
  const int m = mj ? as_positive(*mj, f.at("M"), "M") : 8;
  const Json* ej = f.get("exact");
  const bool exact = ej ? as_bool(*ej, f.at("exact")) : false;
  const Json* muj = f.get("mu");
  const int mu = muj ? as_nonnegative(*muj, f.at("mu")) : 0;
  f.finish();

  Json input{{"p", p}, {"kappa", to_json(kappa)}, {"i", i}};
  Json result;
  if (exact) {
    const Character k = exact_character(p, kappa, m, f.at("kappa"));
    const ExactCharPoly F = make_exact_char_poly(p, mu, cp.coeffs);
    const ExactCharPoly G = twist_char_poly(F, k, i);
    input["charpoly"] = to_json_array(cp.coeffs);
    result = Json{{"coeffs", to_json_array(G.monic.coeffs())}, {"lambda", G.lambda()}};
  } else {
    const Character k(p, m, kappa);
    const Poly<PadicInt> reduced = reduce_rational_poly(cp.coeffs, p, m, cpath);
    const PadicCharPoly F{p, mu, reduced};
    const PadicCharPoly G = twist_char_poly(F, k, i);
    input["charpoly"] = to_json_array(residues(reduced));
    result = Json{{"coeffs", to_json_array(residues(G.monic))}, {"lambda", G.lambda()}, {"precision", m}};
  }
  input["M"] = m;
  input["exact"] = exact;
  input["mu"] = mu;
  return {make_report("twist", std::move(input), std::move(result), exact ? "exact" : "precision"), kOk};
}

inline Outcome run_finiteness(const Json& doc) {
  Fields f(doc, "");
  const std::uint32_t p = as_prime(f.need("p"), f.at("p"));
  const int n = as_nonnegative(f.need("n"), f.at("n"));
  const std::string cpath = f.at("charpoly");
  const CharPolyInput cp = parse_charpoly(f.need("charpoly"), cpath);
  const Json* muj = f.get("mu");
  const int mu = muj ? as_nonnegative(*muj, f.at("mu")) : 0;
  const Json* modej = f.get("mode");
  const std::string mode = modej ? as_string(*modej, f.at("mode")) : "auto";
  require(mode == "auto" || mode == "exact" || mode == "precision", ErrorCode::InvalidArgument,
          f.at("mode") + ": expected auto, exact or precision");
  const Json* mj = f.get("M");
  const int m = mj ? as_positive(*mj, f.at("M"), "M") : 8;
  f.finish();
  require(n <= 6, ErrorCode::SizeLimit, f.at("n") + ": level above 6 is not supported");

  const std::string resolved = mode == "auto" ? (cp.integral ? "exact" : "precision") : mode;
  Json input{{"p", p}, {"n", n}, {"charpoly", to_json_array(cp.coeffs)}, {"mu", mu}, {"mode", mode}, {"M", m}};
  Json result{{"mode", resolved}};
  Finiteness verdict;
  if (resolved == "exact") {
    const ExactCharPoly F = make_exact_char_poly(p, mu, cp.coeffs);
    const Rational res = omega_resultant(F.monic, n, p);
    verdict = coinvariants_finite(F, n);
    result["verdict"] = to_string(verdict);
    result["resultant"] = to_json(res);
    if (verdict == Finiteness::Finite) result["length"] = to_json(coinvariant_length(F, n));
  } else {
    const PadicCharPoly F{p, mu, reduce_rational_poly(cp.coeffs, p, m, cpath)};
    const PadicInt res = omega_resultant(F.monic, n, p);
    verdict = coinvariants_finite(F, n);
    result["verdict"] = to_string(verdict);
    result["resultant"] = Json{{"residue", to_json(res.residue())}, {"precision", m}};
    if (verdict == Finiteness::Finite) result["length"] = to_json(coinvariant_length(F, n));
  }
  return {make_report("finiteness", std::move(input), std::move(result), resolved),
          verdict == Finiteness::Inconclusive ? kInconclusive : kOk};
}

inline Outcome run_exceptional(const Json& doc) {
  Fields f(doc, "");
  const std::uint32_t p = as_prime(f.need("p"), f.at("p"));
  const BigInt kappa = as_bigint(f.need("kappa"), f.at("kappa"));
  const CharPolyInput cp = parse_charpoly(f.need("charpoly"), f.at("charpoly"));
  const int lo = as_int(f.need("lo"), f.at("lo"));
  const int hi = as_int(f.need("hi"), f.at("hi"));
  const int n_max = as_nonnegative(f.need("n_max"), f.at("n_max"));
  const Json* muj = f.get("mu");
  const int mu = muj ? as_nonnegative(*muj, f.at("mu")) : 0;
  f.finish();
  require(hi - lo <= 200, ErrorCode::SizeLimit, "twist range wider than 200");
  require(n_max <= 4, ErrorCode::SizeLimit, f.at("n_max") + ": level above 4 is not supported");

  const Character k = exact_character(p, kappa, 8, f.at("kappa"));
  const ExceptionalTwists ex = exceptional_twists(make_exact_char_poly(p, mu, cp.coeffs), k, lo, hi, n_max);
  Json input{{"p", p}, {"kappa", to_json(kappa)}, {"charpoly", to_json_array(cp.coeffs)}, {"lo", lo}, {"hi", hi},
             {"n_max", n_max}, {"mu", mu}};
  Json result{{"exceptional", Json(std::vector<std::int64_t>(ex.exceptional.begin(), ex.exceptional.end()))}};
  return {make_report("exceptional", std::move(input), std::move(result), "exact"), kOk};
}

inline Diagram parse_diagram(const std::string& name, const std::string& path) {
  for (Diagram d : {Diagram::ResCor, Diagram::CorRes, Diagram::PiTheta}) {
    if (to_string(d) == name) return d;
  }
  parse_fail(path, "unknown diagram '" + name + "'");
}

inline Outcome run_duality(const Json& doc) {
  Fields f(doc, "");
  std::vector<std::uint32_t> primes{2, 3, 5};
  if (const Json* v = f.get("primes")) {
    primes.clear();
    const Json& a = as_array(*v, f.at("primes"));
    for (std::size_t k = 0; k < a.size(); ++k) primes.push_back(as_prime(a[k], f.at("primes") + "/" + std::to_string(k)));
  }
  std::vector<Diagram> diagrams{Diagram::ResCor, Diagram::CorRes, Diagram::PiTheta};
  if (const Json* v = f.get("diagrams")) {
    diagrams.clear();
    const Json& a = as_array(*v, f.at("diagrams"));
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string path = f.at("diagrams") + "/" + std::to_string(k);
      diagrams.push_back(parse_diagram(as_string(a[k], path), path));
    }
  }
  const Json* nj = f.get("n_max");
  const int n_max = nj ? as_nonnegative(*nj, f.at("n_max")) : 2;
  const Json* mj = f.get("m_max");
  const int m_max = mj ? as_positive(*mj, f.at("m_max"), "m_max") : 3;
  const Json* sj = f.get("samples");
  const int samples = sj ? as_nonnegative(*sj, f.at("samples")) : 100;
  const Json* seedj = f.get("seed");
  const BigInt seed = seedj ? as_bigint(*seedj, f.at("seed")) : BigInt(0x5eed);
  f.finish();
  require(seed >= 0 && seed <= std::numeric_limits<std::uint64_t>::max(), ErrorCode::InvalidArgument,
          "seed must fit in 64 bits");
  for (std::uint32_t p : primes) {
    require(ipow(BigInt(p), static_cast<std::uint64_t>(n_max + 1)) <= 10000, ErrorCode::SizeLimit,
            "p^(n_max+1) exceeds 10^4 for p=" + std::to_string(p));
  }

  Json cells = Json::array();
  bool all = true;
  for (Diagram d : diagrams) {
    for (std::uint32_t p : primes) {
      for (int n = 0; n <= n_max; ++n) {
        for (int m = 1; m <= m_max; ++m) {
          const DiagramReport r = check_diagram(d, p, n, m, static_cast<std::size_t>(samples),
                                                static_cast<std::uint64_t>(seed));
          all &= r.pass();
          cells.push_back(Json{{"diagram", to_string(d)}, {"p", p}, {"n", n}, {"m", m}, {"checked", r.checked},
                               {"failures", r.failures}, {"pass", r.pass()}});
        }
      }
    }
  }
  Json names = Json::array();
  for (Diagram d : diagrams) names.push_back(to_string(d));
  Json input{{"primes", primes}, {"diagrams", std::move(names)}, {"n_max", n_max}, {"m_max", m_max},
             {"samples", samples}, {"seed", to_json(seed)}};
  Json result{{"pass", all}, {"cells", std::move(cells)}};
  return {make_report("duality-check", std::move(input), std::move(result), "exact"), all ? kOk : kCheckFailed};
}

inline Outcome run_growth(const Json& doc) {
  Fields f(doc, "");
  const std::uint32_t p = as_prime(f.need("p"), f.at("p"));
  const int n_max = as_nonnegative(f.need("n_max"), f.at("n_max"));
  CofiniteModuleSpec spec;
  if (const Json* v = f.get("corank")) spec.corank = as_nonnegative(*v, f.at("corank"));
  if (const Json* v = f.get("torsion")) spec.torsion = as_int_array(*v, f.at("torsion"));
  f.finish();

  const LimitInvariants inv = tensor_limit_invariants(spec);
  Json rows = Json::array();
  for (const GrowthRow& r : limit_growth_table(spec, p, n_max)) {
    rows.push_back(Json{{"n", r.n}, {"group_order", r.group_order}, {"torsion_log_size", to_json(r.torsion_log_size)},
                        {"cofree_rank", to_json(r.cofree_rank)}, {"cross_checked", r.cross_checked}});
  }
  Json input{{"p", p}, {"n_max", n_max}, {"corank", spec.corank}, {"torsion", spec.torsion}};
  Json result{{"limit", {{"corank", inv.corank}, {"mu", inv.mu}, {"lambda", inv.lambda}}}, {"levels", std::move(rows)}};
  return {make_report("growth", std::move(input), std::move(result), "exact"), kOk};
}

inline ledger::Split parse_split(Fields& f) {
  ledger::Split s;
  if (const Json* v = f.get("h0_rank")) s.h0_rank = as_nonnegative(*v, f.at("h0_rank"));
  if (const Json* v = f.get("torsion")) s.torsion = as_int_array(*v, f.at("torsion"));
  return s;
}

inline Json split_json(const ledger::Split& s) { return Json{{"h0_rank", s.h0_rank}, {"torsion", s.torsion}}; }

inline ledger::LedgerConfig parse_ledger(const Json& doc) {
  using namespace ledger;
  LedgerConfig c;
  Fields top(doc, "");
  {
    Fields f(top.need("field"), top.at("field"));
    const int r1 = as_nonnegative(f.need("r1"), f.at("r1"));
    const int r2 = as_nonnegative(f.need("r2"), f.at("r2"));
    std::optional<int> d;
    if (const Json* v = f.get("degree")) d = as_int(*v, f.at("degree"));
    f.finish();
    c.field = FieldDatum::make(r1, r2, d);
  }
  const std::string ppath = top.at("primes");
  const Json& primes = as_array(top.need("primes"), ppath);
  for (std::size_t k = 0; k < primes.size(); ++k) {
    Fields f(primes[k], ppath + "/" + std::to_string(k));
    PrimeDatum v;
    v.id = as_string(f.need("id"), f.at("id"));
    const std::string kind = as_string(f.need("kind"), f.at("kind"));
    if (kind == "above_p") {
      v.kind = AboveP{as_positive(f.need("local_degree"), f.at("local_degree"), "local_degree")};
    } else if (kind == "finitely_decomposed") {
      v.kind = FinitelyDecomposed{as_nonnegative(f.need("lambda_v"), f.at("lambda_v"))};
    } else if (kind == "split") {
      v.kind = parse_split(f);
    } else {
      parse_fail(f.at("kind"), "expected above_p, finitely_decomposed or split");
    }
    if (const Json* t = f.get("divides_tame_level")) v.divides_tame_level = as_bool(*t, f.at("divides_tame_level"));
    f.finish();
    c.primes.push_back(std::move(v));
  }
  if (const Json* forms = top.get("forms")) {
    const std::string fpath = top.at("forms");
    const Json& a = as_array(*forms, fpath);
    for (std::size_t k = 0; k < a.size(); ++k) {
      Fields f(a[k], fpath + "/" + std::to_string(k));
      FormDatum form;
      form.label = as_string(f.need("label"), f.at("label"));
      form.lambda = as_nonnegative(f.need("lambda"), f.at("lambda"));
      if (const Json* v = f.get("mu")) form.mu = as_nonnegative(*v, f.at("mu"));
      if (const Json* v = f.get("local_lambda")) {
        if (!v->is_object()) parse_fail(f.at("local_lambda"), "expected an object");
        for (const auto& item : v->items()) {
          form.local_lambda[item.key()] =
              as_nonnegative(item.value(), f.at("local_lambda") + "/" + pointer_escape(item.key()));
        }
      }
      if (const Json* v = f.get("split_local")) {
        if (!v->is_object()) parse_fail(f.at("split_local"), "expected an object");
        for (const auto& item : v->items()) {
          Fields sf(item.value(), f.at("split_local") + "/" + pointer_escape(item.key()));
          form.split_local[item.key()] = parse_split(sf);
          sf.finish();
        }
      }
      f.finish();
      c.forms.push_back(std::move(form));
    }
  }
  if (const Json* s = top.get("sigma0")) {
    const Json& a = as_array(*s, top.at("sigma0"));
    for (std::size_t k = 0; k < a.size(); ++k) {
      c.sigma0.push_back(as_string(a[k], top.at("sigma0") + "/" + std::to_string(k)));
    }
  }
  top.finish();
  c.validate();
  return c;
}

inline Json ledger_json(const ledger::LedgerConfig& c) {
  using namespace ledger;
  Json primes = Json::array();
  for (const auto& v : c.primes) {
    Json j{{"id", v.id}};
    if (const auto* a = std::get_if<AboveP>(&v.kind)) {
      j["kind"] = "above_p";
      j["local_degree"] = a->local_degree;
    } else if (const auto* fd = std::get_if<FinitelyDecomposed>(&v.kind)) {
      j["kind"] = "finitely_decomposed";
      j["lambda_v"] = fd->lambda_v;
    } else {
      const auto& s = std::get<Split>(v.kind);
      j["kind"] = "split";
      j["h0_rank"] = s.h0_rank;
      j["torsion"] = s.torsion;
    }
    j["divides_tame_level"] = v.divides_tame_level;
    primes.push_back(std::move(j));
  }
  Json forms = Json::array();
  for (const auto& f : c.forms) {
    Json local = Json::object();
    for (const auto& [id, l] : f.local_lambda) local[id] = l;
    Json split = Json::object();
    for (const auto& [id, s] : f.split_local) split[id] = split_json(s);
    forms.push_back(Json{{"label", f.label}, {"lambda", f.lambda}, {"mu", f.mu}, {"local_lambda", std::move(local)},
                         {"split_local", std::move(split)}});
  }
  return Json{{"field", {{"r1", c.field.r1}, {"r2", c.field.r2}, {"degree", c.field.degree()}}},
              {"primes", std::move(primes)},
              {"forms", std::move(forms)},
              {"sigma0", c.sigma0}};
}

inline Outcome run_ledger(const Json& doc) {
  const ledger::LedgerConfig c = parse_ledger(doc);
  const ledger::LedgerReport r = ledger::evaluate(c);
  Json local = Json::array();
  for (const auto& [id, inv] : r.local) {
    local.push_back(Json{{"id", id}, {"corank", inv.corank}, {"mu", inv.mu},
                         {"lambda", inv.lambda ? Json(*inv.lambda) : Json("unspecified")}});
  }
  Json sigma0 = Json::object();
  for (const auto& [label, l] : r.sigma0_lambda) sigma0[label] = l;
  Json comparisons = Json::array();
  for (const auto& [pair, d] : r.comparisons) {
    comparisons.push_back(Json{{"f1", pair.first}, {"f2", pair.second}, {"difference", d.difference},
                               {"lambda_gap", d.lambda_gap}, {"sigma0_lambda_1", d.sigma0_lambda_1},
                               {"sigma0_lambda_2", d.sigma0_lambda_2}, {"consistent", d.consistent}});
  }
  Json result{{"h1_corank_floor", r.h1_floor},
              {"target_corank", {{"corank", r.corank.corank}, {"degree", r.corank.degree},
                                 {"equals_degree", r.corank.equals_degree},
                                 {"violating_primes", r.corank.violating_primes}}},
              {"local", std::move(local)},
              {"sigma0_lambda", std::move(sigma0)},
              {"comparisons", std::move(comparisons)}};
  return {make_report("ledger", ledger_json(c), std::move(result), "exact"), kOk};
}

using Runner = Outcome (*)(const Json&);

inline Runner runner_for(const std::string& command) {
  static const std::map<std::string, Runner> table{
      {"prep", run_prep},       {"invariants", run_invariants},   {"twist", run_twist},
      {"finiteness", run_finiteness}, {"exceptional", run_exceptional}, {"duality-check", run_duality},
      {"growth", run_growth},   {"ledger", run_ledger}};
  auto it = table.find(command);
  require(it != table.end(), ErrorCode::InvalidArgument, "unknown command " + command);
  return it->second;
}

inline Json error_json(const std::string& command, const Error& e) {
  return Json{{"command", command}, {"error", {{"code", to_string(e.code())}, {"message", e.detail()}}}};
}

/// Runs one task document, or an array of them concurrently (reports keep
/// input order). The batch exit code is the most severe one seen.
inline Outcome run_document(const std::string& command, const Json& doc) {
  const Runner run = runner_for(command);
  if (!doc.is_array()) return run(doc);
  std::vector<std::future<Outcome>> tasks;
  for (const auto& item : doc) {
    tasks.push_back(std::async(std::launch::async, [&, run]() {
      try {
        return run(item);
      } catch (const Error& e) {
        return Outcome{error_json(command, e), kInvalid};
      }
    }));
  }
  Outcome out{Json::array(), kOk};
  auto rank = [](int code) { return code == kInvalid ? 3 : code == kCheckFailed ? 2 : code == kInconclusive ? 1 : 0; };
  for (auto& t : tasks) {
    Outcome o = t.get();
    if (rank(o.exit_code) > rank(out.exit_code)) out.exit_code = o.exit_code;
    out.report.push_back(std::move(o.report));
  }
  return out;
}

// ---------------------------------------------------------------------------
// selftest

inline selftest::CheckResult cli_check(bool fault) {
  selftest::CheckResult r{"cli", "document round trip"};
  const std::vector<std::pair<std::string, std::string>> docs{
      {"prep", R"({"p":3,"M":6,"N":8,"poly":[3,6,-5,1]})"},
      {"twist", R"({"p":3,"kappa":4,"i":-2,"charpoly":[6,-9,0,1],"exact":true})"},
      {"finiteness", R"({"p":3,"n":1,"charpoly":["1/2",-7,1]})"},
      {"growth", R"({"p":3,"n_max":2,"corank":1,"torsion":[2]})"},
      {"ledger", R"({"field":{"r1":1,"r2":0},"primes":[{"id":"p","kind":"above_p","local_degree":1},)"
                 R"({"id":"q","kind":"finitely_decomposed","lambda_v":2}],)"
                 R"("forms":[{"label":"f","lambda":7,"local_lambda":{"q":2}}],"sigma0":["q"]})"}};
  for (const auto& [command, text] : docs) {
    ++r.cases;
    const Json first = run_document(command, parse_document(text)).report;
    Json echoed = first["input"];
    if (fault) echoed.erase(echoed.begin());
    bool ok = false;
    try {
      ok = run_document(command, parse_document(echoed.dump())).report == first;
    } catch (const Error&) {
    }
    if (!ok) ++r.failures;
  }
  // Malformed documents must be rejected as parse errors.
  for (const std::string& bad : {std::string(R"({"p":3,)"), std::string(R"({"p":3,"M":6,"N":8,"poly":[1],"x":1})")}) {
    ++r.cases;
    try {
      run_document("prep", parse_document(bad));
      ++r.failures;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError) ++r.failures;
    }
  }
  return r;
}

inline Outcome run_selftest(const std::string& fault_module) {
  if (!fault_module.empty()) {
    const auto& names = selftest::module_names();
    require(std::find(names.begin(), names.end(), fault_module) != names.end(), ErrorCode::InvalidArgument,
            "unknown module " + fault_module);
  }
  std::vector<selftest::CheckResult> checks = selftest::run_library_checks(fault_module);
  checks.push_back(cli_check(fault_module == "cli"));
  Json items = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    all &= c.pass();
    items.push_back(Json{{"module", c.module}, {"check", c.name}, {"cases", c.cases}, {"failures", c.failures},
                         {"pass", c.pass()}});
  }
  Json input = Json::object();
  if (!fault_module.empty()) input["inject_fault"] = fault_module;
  return {make_report("selftest", std::move(input), Json{{"pass", all}, {"checks", std::move(items)}}, "exact"),
          all ? kOk : kCheckFailed};
}

// ---------------------------------------------------------------------------
// Output

inline void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  const bool scalar_array =
      v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
  if (v.is_object() && !v.empty()) {
    for (const auto& item : v.items()) flatten(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
  } else if (v.is_array() && !scalar_array) {
    for (std::size_t k = 0; k < v.size(); ++k) flatten(v[k], prefix + "[" + std::to_string(k) + "]", out);
  } else {
    out.emplace_back(prefix, v.is_string() ? v.get<std::string>() : v.dump());
  }
}

inline std::string render_table(const Json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return os.str();
}

inline std::string render(const Json& report, const std::string& format) {
  return format == "table" ? render_table(report) : report.dump(2) + "\n";
}

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Entry point

struct FlagSpec {
  std::string flag;    // command-line name without dashes
  std::string field;   // document field
  bool structured;     // value is a JSON array/object and must parse as such
  std::string help;
};

inline const std::map<std::string, std::vector<FlagSpec>>& command_flags() {
  static const std::map<std::string, std::vector<FlagSpec>> flags{
      {"prep",
       {{"p", "p", false, "prime p"},
        {"M", "M", false, "p-adic precision M"},
        {"N", "N", false, "T-adic truncation N"},
        {"poly", "poly", true, "series coefficients, little-endian JSON array"}}},
      {"invariants",
       {{"p", "p", false, "prime p"},
        {"M", "M", false, "p-adic precision M"},
        {"N", "N", false, "T-adic truncation N"},
        {"matrix", "matrix", true, "square matrix of series, JSON array of rows"}}},
      {"twist",
       {{"p", "p", false, "prime p"},
        {"kappa", "kappa", false, "kappa(gamma), congruent to 1 mod p (mod 4 for p=2)"},
        {"i", "i", false, "twist exponent"},
        {"charpoly", "charpoly", true, "monic characteristic polynomial, JSON array"},
        {"M", "M", false, "p-adic precision (default 8)"},
        {"mu", "mu", false, "mu-invariant (default 0)"}}},
      {"finiteness",
       {{"p", "p", false, "prime p"},
        {"n", "n", false, "level n"},
        {"charpoly", "charpoly", true, "monic characteristic polynomial, JSON array"},
        {"mu", "mu", false, "mu-invariant (default 0)"},
        {"mode", "mode", false, "auto, exact or precision (default auto)"},
        {"M", "M", false, "precision for precision mode (default 8)"}}},
      {"exceptional",
       {{"p", "p", false, "prime p"},
        {"kappa", "kappa", false, "kappa(gamma)"},
        {"charpoly", "charpoly", true, "monic characteristic polynomial, JSON array"},
        {"lo", "lo", false, "lowest twist"},
        {"hi", "hi", false, "highest twist"},
        {"n-max", "n_max", false, "largest level n"},
        {"mu", "mu", false, "mu-invariant (default 0)"}}},
      {"duality-check",
       {{"primes", "primes", true, "primes to check, JSON array (default [2,3,5])"},
        {"diagrams", "diagrams", true, "diagram names, JSON array (default all)"},
        {"n-max", "n_max", false, "largest level (default 2)"},
        {"m-max", "m_max", false, "largest exponent (default 3)"},
        {"samples", "samples", false, "random functionals per cell (default 100)"},
        {"seed", "seed", false, "sampling seed"}}},
      {"growth",
       {{"p", "p", false, "prime p"},
        {"n-max", "n_max", false, "largest level"},
        {"corank", "corank", false, "corank r of M (default 0)"},
        {"torsion", "torsion", true, "torsion exponents m_i, JSON array"}}},
      {"ledger", {}},
  };
  return flags;
}

/// Scalar flag text becomes a JSON number when it parses as one and a string
/// otherwise; structured flags must be valid JSON.
inline Json flag_value(const FlagSpec& spec, const std::string& text) {
  if (spec.structured) return parse_document(text, "--" + spec.flag);
  try {
    Json v = Json::parse(text);
    if (v.is_primitive()) return v;
  } catch (const Json::parse_error&) {
  }
  return text;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Iwasawa algebra computations", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string format = "json";
  std::string output;
  std::string input;
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--output", output, "write the report to this file");
  app.add_option("--input", input, "read the task document from this file ('-' for stdin)");
  app.fallthrough();

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> descriptions{
      {"prep", "Weierstrass preparation of a series"},
      {"invariants", "mu and lambda of a square matrix over the Iwasawa algebra"},
      {"twist", "characteristic polynomial of a twist"},
      {"finiteness", "finiteness of coinvariants at level n"},
      {"exceptional", "twists with infinite coinvariants"},
      {"duality-check", "verify the group-ring duality diagrams"},
      {"growth", "level-by-level growth of M tensor Z_p[G_n]"},
      {"ledger", "evaluate a Selmer invariant ledger document"}};
  for (const auto& [command, specs] : command_flags()) {
    CLI::App* sub = app.add_subcommand(command, descriptions.at(command));
    subs[command] = sub;
    for (const auto& spec : specs) sub->add_option("--" + spec.flag, values[command][spec.flag], spec.help);
  }
  bool exact = false;
  subs["twist"]->add_flag("--exact", exact, "exact rational arithmetic");
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "run every module's invariant checks");
  std::string fault;
  selftest_cmd->add_option("--inject-fault", fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  Outcome outcome;
  try {
    if (command == "selftest") {
      outcome = run_selftest(fault);
    } else {
      Json doc = Json::object();
      bool any_flag = exact;
      for (const auto& spec : command_flags().at(command)) {
        if (subs[command]->count("--" + spec.flag) > 0) {
          any_flag = true;
          doc[spec.field] = flag_value(spec, values[command][spec.flag]);
        }
      }
      if (exact) doc["exact"] = true;
      if (!input.empty()) {
        require(!any_flag, ErrorCode::InvalidArgument, "give either --input or task flags, not both");
        doc = parse_document(read_text(input), input);
      }
      outcome = run_document(command, doc);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  const std::string text = render(outcome.report, format);
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output);
    if (!file) {
      err << "error: cannot write " << output << '\n';
      return kInvalid;
    }
    file << text;
  }
  return outcome.exit_code;
}

}  // namespace iwasawa::cli
