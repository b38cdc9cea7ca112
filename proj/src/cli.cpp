#include "tribes/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "tribes/error.hpp"

namespace tribes::cli {

namespace {

// --- I/O --------------------------------------------------------------------

Json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_document(const Json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
}

// --- Field access -----------------------------------------------------------

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::uint64_t unsigned_field(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw InputError(where + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double number_field(const Json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  return v.get<double>();
}

// Decimal text of a JSON string or number. Numbers use their shortest
// round-trip rendering, which is what the author most likely typed.
std::string decimal_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw InputError(where + ": expected a decimal string");
}

BoundSequence bounds_from_input(const Json& doc) {
  const Json& list = member(doc, "bounds", "input");
  if (!list.is_array()) throw InputError("input: 'bounds' must be an array");
  std::vector<std::string> text;
  for (std::size_t j = 0; j < list.size(); ++j) {
    text.push_back(decimal_text(list[j], "bounds[" + std::to_string(j) + "]"));
  }
  try {
    return BoundSequence::from_decimal_strings(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Rational parse_mu(const std::string& text) {
  Rational mu;
  try {
    mu = Rational::parse_decimal(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("mu: ") + e.what());
  }
  if (mu.sign() <= 0 || mu >= Rational(1)) {
    throw InputError("mu = " + text + " must satisfy 0 < mu < 1");
  }
  return mu;
}

// --- Serialization ----------------------------------------------------------

Json checks_to_json(const std::vector<Check>& checks) {
  Json out = Json::object();
  for (const Check& c : checks) {
    Json entry;
    entry["pass"] = c.pass;
    entry["margin"] = c.margin;
    entry["margin_exact"] = c.exact_margin ? Json(c.exact_margin->str()) : Json(nullptr);
    out[c.name] = std::move(entry);
  }
  return out;
}

Json optional_index(const std::optional<std::size_t>& i) {
  return i ? Json(*i + 1) : Json(nullptr);
}

Json quantity_to_json(const QuantityMatch& q, VerifyMode mode) {
  Json out;
  out["quantity"] = q.quantity;
  out["position"] = optional_index(q.position);
  out["index"] = optional_index(q.original_index);
  out["analytic"] = dyadic_to_json(q.analytic);
  if (mode == VerifyMode::exhaustive) {
    out["oracle"] = q.oracle ? dyadic_to_json(*q.oracle) : Json(nullptr);
  } else {
    out["estimate"] = q.estimate;
    out["std_error"] = q.std_error;
    out["z"] = q.z;
  }
  out["match"] = q.match;
  return out;
}

Json summary_fields(const AnalysisSummary& s) {
  Json out;
  out["talagrand_sum"] = s.talagrand_sum;
  out["alpha"] = s.alpha;
  out["mu_max"] = s.mu_max;
  out["feasible"] = s.feasible;
  return out;
}

Json diagnostics_to_json(const ConstructionReport& r) {
  const Dyadic var = r.expectation * one_minus(r.expectation);
  Json out;
  try {
    out["talagrand_ratio"] = talagrand_ratio(r.influences, var);
  } catch (const ConstantFunction&) {
    out["talagrand_ratio"] = nullptr;
  }
  try {
    out["kkl_ratio"] = kkl_ratio(r.influences, r.bounds.size(), var);
  } catch (const std::exception&) {
    out["kkl_ratio"] = nullptr;
  }
  return out;
}

Json failure_verification(VerifyMode mode, const std::vector<std::string>& failures) {
  Json out;
  out["mode"] = mode == VerifyMode::exhaustive ? "exhaustive" : "sampled";
  out["passed"] = false;
  out["failures"] = failures;
  return out;
}

struct VerifySettings {
  std::string mode;  // exact | sample | none | "" (auto)
  unsigned cap = kDefaultTruthTableCap;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double z_threshold = kDefaultZThreshold;
};

// Runs the requested verification; returns the JSON block and whether it
// passed. VerificationFailure is folded into a failed block.
std::pair<Json, bool> run_verification(const ConstructionReport& r,
                                       const VerifySettings& s, std::ostream& err) {
  bool exhaustive = s.mode == "exact" || s.mode.empty();
  if (s.mode == "sample") exhaustive = false;
  if (exhaustive && r.function.relevant() > s.cap) {
    if (s.mode == "exact") {
      err << "note: " << r.function.relevant() << " relevant variables exceed cap "
          << s.cap << "; verifying by sampling\n";
    }
    exhaustive = false;
  }
  const VerifyMode mode = exhaustive ? VerifyMode::exhaustive : VerifyMode::sampled;
  try {
    const VerificationReport v =
        exhaustive ? verify_exact(r.function, r, s.cap)
                   : verify_sampled(r.function, r, s.samples, s.seed, s.z_threshold);
    err << "verification: " << (exhaustive ? "exhaustive" : "sampled") << ", "
        << (v.passed() ? "passed" : "FAILED") << " in " << v.wall_time << " s\n";
    return {verification_to_json(v), v.passed()};
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return {failure_verification(mode, {e.what()}), false};
  }
}

// --- Commands ---------------------------------------------------------------

int cmd_analyze(const std::string& input, const std::string& output, std::ostream& out) {
  const Json doc = read_document(input);
  const BoundSequence bounds = bounds_from_input(doc);
  write_document(summary_fields(analyze(bounds)), output, out);
  return kSuccessGuaranteed;
}

int cmd_construct(const std::string& input, const std::string& output,
                  const std::optional<std::string>& mu_flag, const VerifySettings& vs,
                  std::ostream& out, std::ostream& err) {
  const Json doc = read_document(input);
  const BoundSequence bounds = bounds_from_input(doc);
  std::string mu_text;
  if (mu_flag) {
    mu_text = *mu_flag;
  } else if (doc.is_object() && doc.contains("mu")) {
    mu_text = decimal_text(doc.at("mu"), "mu");
  } else {
    throw InputError("construct needs mu (--mu or \"mu\" in the input)");
  }
  const Rational mu = parse_mu(mu_text);

  ConstructionReport report;
  try {
    report = construct(bounds, mu);
  } catch (const Error& e) {
    const bool infeasible = dynamic_cast<const ConstructionInfeasible*>(&e) != nullptr;
    if (!infeasible && dynamic_cast<const MuNotAchievable*>(&e) == nullptr) throw;
    const AnalysisSummary s = analyze(bounds);
    const TribePartition p = partition(sort_bounds(bounds));
    Json failed;
    failed["n"] = bounds.size();
    failed["talagrand_sum"] = s.talagrand_sum;
    failed["alpha"] = s.alpha;
    failed["mu"] = mu.str();
    failed["mu_max"] = s.mu_max;
    failed["guaranteed"] = s.feasible && mu.to_double() <= s.mu_max + kLogTolerance;
    failed["m"] = p.m();
    failed["tribe_sizes"] = p.k;
    failed["residual"] = p.residual();
    failed["error"] = {{"kind", infeasible ? "construction-infeasible" : "mu-not-achievable"},
                       {"message", e.what()}};
    write_document(failed, output, out);
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  }

  Json result = report_to_json(report);
  int code = report.all_checks_pass()
                 ? (report.guaranteed ? kSuccessGuaranteed : kSuccessUnguaranteed)
                 : kVerificationFailure;
  if (vs.mode != "none") {
    auto [block, passed] = run_verification(report, vs, err);
    result = with_verification(result, std::move(block));
    if (!passed) code = kVerificationFailure;
  }
  write_document(result, output, out);
  return code;
}

int cmd_verify(const std::string& input, const std::string& output,
               const VerifySettings& vs, std::ostream& out, std::ostream& err) {
  const Json doc = read_document(input);
  const ParsedReport parsed = parse_report(doc);

  VerifySettings auto_mode = vs;
  auto_mode.mode.clear();
  auto [block, passed] = run_verification(parsed.report, auto_mode, err);
  if (const auto issues = consistency_issues(parsed); !issues.empty()) {
    for (const auto& issue : issues) err << "inconsistent report: " << issue << "\n";
    Json& failures = block["failures"];
    for (const auto& issue : issues) failures.push_back(issue);
    block["passed"] = false;
    passed = false;
  }
  write_document(with_verification(doc, std::move(block)), output, out);
  return passed ? kSuccessGuaranteed : kVerificationFailure;
}

}  // namespace

// --- Public helpers -----------------------------------------------------------

Json dyadic_to_json(const Dyadic& d) {
  Json out;
  out["mantissa"] = d.mantissa().get_str();
  out["exponent"] = d.exponent();
  out["approx"] = d.to_double();
  return out;
}

Dyadic dyadic_from_json(const Json& j, const std::string& where) {
  const Json& m = member(j, "mantissa", where);
  if (!m.is_string()) throw InputError(where + ".mantissa: expected a decimal string");
  const std::string text = m.get<std::string>();
  mpz_class mantissa;
  const bool digits_only =
      !text.empty() && text.find_first_not_of("0123456789", text[0] == '-' ? 1 : 0) ==
                           std::string::npos && text != "-";
  if (!digits_only || mantissa.set_str(text, 10) != 0) {
    throw InputError(where + ".mantissa: '" + text + "' is not an integer");
  }
  const std::uint64_t exponent =
      unsigned_field(member(j, "exponent", where), where + ".exponent");
  return Dyadic(std::move(mantissa), exponent);
}

Json report_to_json(const ConstructionReport& r) {
  Json out;
  out["n"] = r.bounds.size();
  out["talagrand_sum"] = r.summary.talagrand_sum;
  out["alpha"] = r.summary.alpha;
  out["mu"] = r.mu.str();
  out["mu_max"] = r.summary.mu_max;
  out["guaranteed"] = r.guaranteed;
  out["m"] = r.partition.m();
  out["tribe_sizes"] = r.partition.k;
  out["residual"] = r.partition.residual();
  out["m_star"] = r.m_star;
  Json var_map = Json::array();
  for (const std::size_t j : r.function.var_map) var_map.push_back(j + 1);
  out["var_map"] = std::move(var_map);
  out["expectation"] = dyadic_to_json(r.expectation);
  Json influences = Json::array();
  for (std::size_t j = 0; j < r.influences.size(); ++j) {
    Json entry;
    entry["index"] = j + 1;
    const Json exact = dyadic_to_json(r.influences[j]);
    entry["mantissa"] = exact["mantissa"];
    entry["exponent"] = exact["exponent"];
    entry["approx"] = exact["approx"];
    entry["bound"] = r.bounds.sources()[j];
    entry["strictly_below"] = compare(r.influences[j], r.bounds[j]) < 0;
    influences.push_back(std::move(entry));
  }
  out["influences"] = std::move(influences);
  out["checks"] = checks_to_json(r.checks);
  out["diagnostics"] = diagnostics_to_json(r);
  return out;
}

Json verification_to_json(const VerificationReport& v) {
  Json out;
  out["mode"] = v.mode == VerifyMode::exhaustive ? "exhaustive" : "sampled";
  out["passed"] = v.passed();
  if (v.mode == VerifyMode::sampled) {
    out["samples"] = v.samples;
    out["seed"] = v.seed;
    out["z_threshold"] = v.z_threshold;
  }
  out["expectation"] = quantity_to_json(v.expectation, v.mode);
  Json influences = Json::array();
  for (const auto& q : v.influences) influences.push_back(quantity_to_json(q, v.mode));
  out["influences"] = std::move(influences);
  out["checks"] = checks_to_json(v.checks);
  return out;
}

Json with_verification(const Json& doc, Json verification) {
  Json out = Json::object();
  bool placed = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "verification") continue;
    if (key == "diagnostics" && !placed) {
      out["verification"] = verification;
      placed = true;
    }
    out[key] = value;
  }
  if (!placed) out["verification"] = std::move(verification);
  return out;
}

ParsedReport parse_report(const Json& doc) {
  if (!doc.is_object()) throw InputError("report: expected a JSON object");
  ParsedReport parsed;
  parsed.document = doc;
  ConstructionReport& r = parsed.report;

  const std::size_t n = unsigned_field(member(doc, "n", "report"), "report.n");
  const Json& influences = member(doc, "influences", "report");
  if (!influences.is_array() || influences.size() != n) {
    throw InputError("report.influences: expected an array of n = " + std::to_string(n) +
                     " entries");
  }
  std::vector<std::string> bound_text;
  for (std::size_t j = 0; j < n; ++j) {
    const std::string where = "report.influences[" + std::to_string(j) + "]";
    const Json& entry = influences[j];
    if (unsigned_field(member(entry, "index", where), where + ".index") != j + 1) {
      throw InputError(where + ".index: expected " + std::to_string(j + 1));
    }
    bound_text.push_back(decimal_text(member(entry, "bound", where), where + ".bound"));
    r.influences.push_back(dyadic_from_json(entry, where));
    number_field(member(entry, "approx", where), where + ".approx");
  }
  try {
    r.bounds = BoundSequence::from_decimal_strings(bound_text);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("report bounds: ") + e.what());
  }
  r.mu = parse_mu(decimal_text(member(doc, "mu", "report"), "report.mu"));
  r.summary = analyze(r.bounds);
  r.guaranteed = r.summary.feasible && r.mu.to_double() <= r.summary.mu_max + kLogTolerance;
  r.sorted = sort_bounds(r.bounds);

  const Json& sizes = member(doc, "tribe_sizes", "report");
  if (!sizes.is_array()) throw InputError("report.tribe_sizes: expected an array");
  r.partition.n = n;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::uint64_t k =
        unsigned_field(sizes[i], "report.tribe_sizes[" + std::to_string(i) + "]");
    if (k < 1 || k > n) throw InputError("report.tribe_sizes: size out of range");
    r.partition.k.push_back(static_cast<std::uint32_t>(k));
  }
  if (r.partition.prefix(r.partition.m()) > n) {
    throw InputError("report.tribe_sizes: sizes add up to more than n");
  }
  r.m_star = unsigned_field(member(doc, "m_star", "report"), "report.m_star");
  if (r.m_star < 1 || r.m_star > r.partition.m()) {
    throw InputError("report.m_star: outside 1..m");
  }

  r.function.n = n;
  r.function.tribe_sizes.assign(r.partition.k.begin(),
                                r.partition.k.begin() + static_cast<std::ptrdiff_t>(r.m_star));
  const Json& var_map = member(doc, "var_map", "report");
  if (!var_map.is_array() || var_map.size() != r.function.relevant()) {
    throw InputError("report.var_map: expected " + std::to_string(r.function.relevant()) +
                     " entries");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t q = 0; q < var_map.size(); ++q) {
    const std::uint64_t j = unsigned_field(var_map[q], "report.var_map");
    if (j < 1 || j > n || seen[j - 1]) {
      throw InputError("report.var_map: entries must be distinct indices in 1..n");
    }
    seen[j - 1] = true;
    r.function.var_map.push_back(j - 1);
  }

  const Json& expectation = member(doc, "expectation", "report");
  r.expectation = dyadic_from_json(expectation, "report.expectation");
  number_field(member(expectation, "approx", "report.expectation"),
               "report.expectation.approx");
  r.checks = check_theorem(r, r.bounds, r.mu);
  return parsed;
}

std::vector<std::string> consistency_issues(const ParsedReport& parsed) {
  const ConstructionReport& r = parsed.report;
  const Json& doc = parsed.document;
  std::vector<std::string> issues;

  ConstructionReport fresh;
  try {
    fresh = construct(r.bounds, r.mu);
  } catch (const std::exception& e) {
    issues.push_back(std::string("bounds and mu do not reconstruct: ") + e.what());
    return issues;
  }
  if (fresh.partition != r.partition) issues.push_back("tribe_sizes differ from the partition");
  if (fresh.m_star != r.m_star) issues.push_back("m_star differs from the minimal prefix");
  if (fresh.function != r.function) issues.push_back("var_map differs from the sorted order");
  if (fresh.expectation != r.expectation) {
    issues.push_back("expectation " + r.expectation.str() + " differs from the formula value " +
                     fresh.expectation.str());
  }
  if (doc.at("expectation").at("approx").get<double>() != r.expectation.to_double()) {
    issues.push_back("expectation.approx does not match the exact value");
  }
  for (std::size_t j = 0; j < r.influences.size(); ++j) {
    const Json& entry = doc.at("influences")[j];
    const std::string label = "influences[" + std::to_string(j + 1) + "]";
    if (fresh.influences[j] != r.influences[j]) {
      issues.push_back(label + " " + r.influences[j].str() + " differs from the formula value " +
                       fresh.influences[j].str());
    }
    if (entry.at("approx").get<double>() != r.influences[j].to_double()) {
      issues.push_back(label + ".approx does not match the exact value");
    }
    const bool below = compare(r.influences[j], r.bounds[j]) < 0;
    if (!entry.contains("strictly_below") || entry.at("strictly_below") != Json(below)) {
      issues.push_back(label + ".strictly_below is not " + (below ? "true" : "false"));
    }
  }
  if (doc.contains("checks") && doc.at("checks").is_object()) {
    for (const Check& c : r.checks) {
      const Json& stored = doc.at("checks");
      if (!stored.contains(c.name) || !stored.at(c.name).is_object() ||
          stored.at(c.name).value("pass", !c.pass) != c.pass) {
        issues.push_back("checks." + c.name + ".pass disagrees with recomputation");
      }
    }
  } else {
    issues.push_back("checks block missing");
  }
  return issues;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tribes functions with prescribed influence budgets", "tribes"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::optional<std::string> mu;
  VerifySettings vs;

  auto* analyze_cmd = app.add_subcommand("analyze", "Talagrand sum, alpha and the mu range");
  analyze_cmd->add_option("--input", input, "Input JSON document ('-' for stdin)")->required();
  analyze_cmd->add_option("--output", output, "Output path (default: stdout)");

  auto* construct_cmd = app.add_subcommand("construct", "Build and certify the tribes function");
  construct_cmd->add_option("--input", input, "Input JSON document ('-' for stdin)")->required();
  construct_cmd->add_option("--output", output, "Output path (default: stdout)");
  construct_cmd->add_option("--mu", mu, "Target expectation as a decimal; overrides the document");
  construct_cmd->add_option("--verify", vs.mode, "exact | sample | none (default: exact within cap)")
      ->check(CLI::IsMember({"exact", "sample", "none"}));
  construct_cmd->add_option("--cap", vs.cap, "Truth-table variable cap")->check(CLI::Range(0u, 34u));
  construct_cmd->add_option("--samples", vs.samples, "Samples per sampled quantity");
  construct_cmd->add_option("--seed", vs.seed, "Sampler seed");
  construct_cmd->add_option("--z-threshold", vs.z_threshold, "Sampled-mode |z| alarm level");

  auto* verify_cmd = app.add_subcommand("verify", "Re-certify a construct report");
  verify_cmd->add_option("--input", input, "Report JSON ('-' for stdin)")->required();
  verify_cmd->add_option("--output", output, "Output path (default: stdout)");
  verify_cmd->add_option("--cap", vs.cap, "Truth-table variable cap")->check(CLI::Range(0u, 34u));
  verify_cmd->add_option("--samples", vs.samples, "Samples per sampled quantity");
  verify_cmd->add_option("--seed", vs.seed, "Sampler seed");
  verify_cmd->add_option("--z-threshold", vs.z_threshold, "Sampled-mode |z| alarm level");

  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) storage.emplace_back("tribes");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccessGuaranteed : kInputError;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(input, output, out);
    if (construct_cmd->parsed()) return cmd_construct(input, output, mu, vs, out, err);
    return cmd_verify(input, output, vs, out, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
  }
  return kInputError;
}

}  // namespace tribes::cli
