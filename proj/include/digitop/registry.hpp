#pragma once

// Claims registry, verifier dispatch and the audit report.

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "digitop/error.hpp"
#include "digitop/io.hpp"
#include "digitop/verifiers.hpp"

#ifndef DIGITOP_DATA_DIR
#define DIGITOP_DATA_DIR "data"
#endif

namespace digitop {

enum class ClaimStatus { Refuted, Trivial, Correct, Unproven, InvalidSetting, Duplicate };

inline std::string to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Refuted: return "REFUTED";
    case ClaimStatus::Trivial: return "TRIVIAL";
    case ClaimStatus::Correct: return "CORRECT";
    case ClaimStatus::Unproven: return "UNPROVEN";
    case ClaimStatus::InvalidSetting: return "INVALID-SETTING";
    case ClaimStatus::Duplicate: return "DUPLICATE";
  }
  return "?";
}

inline ClaimStatus claim_status_from_string(const std::string& s) {
  for (auto st : {ClaimStatus::Refuted, ClaimStatus::Trivial, ClaimStatus::Correct, ClaimStatus::Unproven,
                  ClaimStatus::InvalidSetting, ClaimStatus::Duplicate})
    if (to_string(st) == s) return st;
  throw ParseError("unknown claim status \"" + s + "\"");
}

inline bool needs_verifier(ClaimStatus s) {
  return s == ClaimStatus::Refuted || s == ClaimStatus::Trivial || s == ClaimStatus::Correct;
}

struct Claim {
  std::string id;
  std::string source;
  std::string summary;
  ClaimStatus expected_status = ClaimStatus::Unproven;
  std::vector<std::string> secondary_statuses;
  std::optional<std::string> verifier;
  std::string notes;
};

// Shared state for one registry run. One compatibility sweep per image feeds
// every compatibility claim.
class SweepCache {
 public:
  const CompatSweep& compat(const MetricSpace& space, const std::string& key, const AuditContext& ctx) {
    std::lock_guard lock(mu_);
    auto it = compat_.find(key);
    if (it == compat_.end()) it = compat_.emplace(key, sweep_compatibility(space, ctx.budget, ctx.parallelism)).first;
    return it->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, CompatSweep> compat_;
};

using VerifierFn = std::function<VerifierResult(const AuditContext&, SweepCache&)>;

namespace detail {

inline VerifierResult compat_over_catalog(const AuditContext& ctx, SweepCache& cache, CompatClaim claim) {
  json runs = json::array();
  bool ok = true;
  for (const auto& entry : builtin_catalog()) {
    // Limits in a discrete space only see whether distances vanish, so one metric suffices.
    const MetricSpace space(entry.image, MetricSpec::l1(), ctx.tau);
    const auto& sweep = cache.compat(space, entry.id, ctx);
    auto res = compat_verdict(sweep, claim, space, ctx.budget);
    ok = ok && res.verdict == Verdict::Confirmed;
    runs.push_back({{"image", entry.id}, {"verdict", to_string(res.verdict)}, {"witness", res.witness}});
  }
  VerifierResult r;
  r.verdict = ok ? Verdict::Confirmed : Verdict::Failed;
  r.witness = {{"runs", runs}};
  return r;
}

}  // namespace detail

inline const std::map<std::string, VerifierFn>& verifier_table() {
  static const std::map<std::string, VerifierFn> table = {
      {"shukla31_refutation",
       [](const AuditContext& ctx, SweepCache&) { return verify_shukla31_refutation(Rational(49, 100), {}, ctx.tau); }},
      {"jk_remark32_refutation", [](const AuditContext&, SweepCache&) { return verify_jk_remark32_refutation(); }},
      {"jk34_35_refutation", [](const AuditContext&, SweepCache&) { return verify_jk34_35_refutation(); }},
      {"nonconverge_example", [](const AuditContext&, SweepCache&) { return verify_nonconverge_example(5); }},
      {"psi_trivialities", [](const AuditContext&, SweepCache&) { return verify_psi_trivialities(1000); }},
      {"geraghty_triviality",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_geraghty_triviality(s, ctx.budget); });
       }},
      {"gconst",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_gconst(s, ctx.budget, ctx.parallelism); });
       }},
      {"krishna_special_case",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_krishna_special_case(s, ctx.budget); });
       }},
      {"wus_collapse",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_wus_collapse(s, ctx.budget); });
       }},
      {"kalj32_triviality",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_kalj32_triviality(s, ctx.budget); });
       }},
      {"kandt",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_kandt(s, ctx.budget); });
       }},
      {"continuity_criterion",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(
             ctx, [&](const MetricSpace& s) { return verify_continuity_criterion(s.image_ptr(), ctx.budget); }, false);
       }},
      {"eventually_constant",
       [](const AuditContext& ctx, SweepCache&) {
         return over_catalog(ctx, [&](const MetricSpace& s) { return verify_eventually_constant(s); });
       }},
      {"compat_equivalence",
       [](const AuditContext& ctx, SweepCache& c) {
         return detail::compat_over_catalog(ctx, c, CompatClaim::Equivalence);
       }},
      {"compat_type_k",
       [](const AuditContext& ctx, SweepCache& c) { return detail::compat_over_catalog(ctx, c, CompatClaim::TypeK); }},
      {"compat_type_r",
       [](const AuditContext& ctx, SweepCache& c) { return detail::compat_over_catalog(ctx, c, CompatClaim::TypeR); }},
      {"jainr32",
       [](const AuditContext& ctx, SweepCache& c) { return detail::compat_over_catalog(ctx, c, CompatClaim::JainR32); }},
      {"jainr33",
       [](const AuditContext& ctx, SweepCache& c) { return detail::compat_over_catalog(ctx, c, CompatClaim::JainR33); }},
  };
  return table;
}

inline Claim claim_from_json(const json& j) {
  try {
    Claim c;
    c.id = j.at("id").get<std::string>();
    c.source = j.at("source").get<std::string>();
    c.summary = j.at("summary").get<std::string>();
    c.expected_status = claim_status_from_string(j.at("expected_status").get<std::string>());
    if (j.contains("secondary_statuses"))
      for (const auto& s : j.at("secondary_statuses")) {
        claim_status_from_string(s.get<std::string>());
        c.secondary_statuses.push_back(s.get<std::string>());
      }
    if (j.contains("verifier") && !j.at("verifier").is_null()) c.verifier = j.at("verifier").get<std::string>();
    c.notes = j.value("notes", "");
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("claim entry: ") + e.what());
  }
}

inline json claim_to_json(const Claim& c) {
  json j{{"id", c.id},
         {"source", c.source},
         {"summary", c.summary},
         {"expected_status", to_string(c.expected_status)},
         {"notes", c.notes}};
  if (!c.secondary_statuses.empty()) j["secondary_statuses"] = c.secondary_statuses;
  j["verifier"] = c.verifier ? json(*c.verifier) : json(nullptr);
  return j;
}

inline std::vector<Claim> load_registry(const json& j) {
  if (!j.is_array()) throw ParseError("claims registry must be a JSON array");
  std::vector<Claim> claims;
  std::set<std::string> ids;
  for (const auto& e : j) {
    auto c = claim_from_json(e);
    if (!ids.insert(c.id).second) throw ParseError("duplicate claim id \"" + c.id + "\"");
    if (needs_verifier(c.expected_status) && !c.verifier)
      throw ParseError("claim \"" + c.id + "\" with status " + to_string(c.expected_status) + " must name a verifier");
    if (!needs_verifier(c.expected_status) && c.verifier)
      throw ParseError("claim \"" + c.id + "\" with status " + to_string(c.expected_status) +
                       " must not name a verifier");
    if (c.verifier && !verifier_table().count(*c.verifier))
      throw ParseError("claim \"" + c.id + "\" names unknown verifier \"" + *c.verifier + "\"");
    claims.push_back(std::move(c));
  }
  return claims;
}

inline std::string default_registry_path() { return std::string(DIGITOP_DATA_DIR) + "/claims.json"; }

inline std::vector<Claim> load_registry_file(const std::string& path = default_registry_path()) {
  return load_registry(io::load_json_file(path));
}

struct ClaimResult {
  std::string id;
  std::string source;
  ClaimStatus expected_status = ClaimStatus::Unproven;
  std::optional<std::string> verifier;
  Verdict machine_verdict = Verdict::Skipped;
  bool matched = false;
  json witness = json::object();
  std::string detail;
  double elapsed_ms = 0;

  friend bool operator==(const ClaimResult&, const ClaimResult&) = default;
};

struct AuditSummary {
  std::size_t total = 0, confirmed = 0, failed = 0, skipped = 0, matched = 0, mismatched = 0;
  friend bool operator==(const AuditSummary&, const AuditSummary&) = default;
};

struct AuditReport {
  std::vector<ClaimResult> claims;
  AuditSummary summary;
  double elapsed_ms = 0;

  bool ok() const { return summary.mismatched == 0; }
  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

inline ClaimResult run_claim(const Claim& c, const AuditContext& ctx, SweepCache& cache) {
  ClaimResult r;
  r.id = c.id;
  r.source = c.source;
  r.expected_status = c.expected_status;
  r.verifier = c.verifier;
  const auto t0 = std::chrono::steady_clock::now();
  if (!c.verifier) {
    r.machine_verdict = Verdict::Skipped;
    r.detail = "registry-only status";
    r.matched = true;
  } else {
    try {
      auto res = verifier_table().at(*c.verifier)(ctx, cache);
      r.machine_verdict = res.verdict;
      r.witness = std::move(res.witness);
      r.detail = std::move(res.detail);
    } catch (const Error& e) {
      r.machine_verdict = Verdict::Failed;
      r.detail = std::string("error: ") + e.what();
    }
    r.matched = r.machine_verdict == Verdict::Confirmed;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Runs the selected claims in registry order; an empty filter selects all.
inline AuditReport run_registry(const std::vector<Claim>& registry, const std::vector<std::string>& filter = {},
                                const AuditContext& ctx = {}) {
  for (const auto& id : filter) {
    const bool known = std::any_of(registry.begin(), registry.end(), [&](const Claim& c) { return c.id == id; });
    if (!known) throw ContractError("unknown claim id \"" + id + "\"");
  }
  const std::set<std::string> wanted(filter.begin(), filter.end());
  AuditReport report;
  SweepCache cache;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : registry) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    report.claims.push_back(run_claim(c, ctx, cache));
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  auto& s = report.summary;
  for (const auto& r : report.claims) {
    ++s.total;
    switch (r.machine_verdict) {
      case Verdict::Confirmed: ++s.confirmed; break;
      case Verdict::Failed: ++s.failed; break;
      case Verdict::Skipped: ++s.skipped; break;
    }
    ++(r.matched ? s.matched : s.mismatched);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Report serialization. Timing lives only in "elapsed_ms" fields.

inline json report_to_json(const AuditReport& report) {
  json claims = json::array();
  for (const auto& r : report.claims) {
    json j{{"id", r.id},
           {"source", r.source},
           {"expected_status", to_string(r.expected_status)},
           {"verifier", r.verifier ? json(*r.verifier) : json(nullptr)},
           {"machine_verdict", to_string(r.machine_verdict)},
           {"matched", r.matched},
           {"witness", r.witness},
           {"detail", r.detail},
           {"elapsed_ms", r.elapsed_ms}};
    claims.push_back(std::move(j));
  }
  const auto& s = report.summary;
  return {{"claims", claims},
          {"summary",
           {{"total", s.total},
            {"confirmed", s.confirmed},
            {"failed", s.failed},
            {"skipped", s.skipped},
            {"matched", s.matched},
            {"mismatched", s.mismatched}}},
          {"elapsed_ms", report.elapsed_ms}};
}

inline AuditReport report_from_json(const json& j) {
  try {
    AuditReport report;
    for (const auto& c : j.at("claims")) {
      ClaimResult r;
      r.id = c.at("id").get<std::string>();
      r.source = c.at("source").get<std::string>();
      r.expected_status = claim_status_from_string(c.at("expected_status").get<std::string>());
      if (!c.at("verifier").is_null()) r.verifier = c.at("verifier").get<std::string>();
      const auto v = verdict_from_string(c.at("machine_verdict").get<std::string>());
      if (!v) throw ParseError("unknown machine verdict " + c.at("machine_verdict").dump());
      r.machine_verdict = *v;
      r.matched = c.at("matched").get<bool>();
      r.witness = c.at("witness");
      r.detail = c.at("detail").get<std::string>();
      r.elapsed_ms = c.at("elapsed_ms").get<double>();
      report.claims.push_back(std::move(r));
    }
    const auto& s = j.at("summary");
    report.summary = {s.at("total").get<std::size_t>(),   s.at("confirmed").get<std::size_t>(),
                      s.at("failed").get<std::size_t>(),  s.at("skipped").get<std::size_t>(),
                      s.at("matched").get<std::size_t>(), s.at("mismatched").get<std::size_t>()};
    report.elapsed_ms = j.at("elapsed_ms").get<double>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("audit report: ") + e.what());
  }
}

// Drops every "elapsed_ms" field, for determinism comparisons.
inline json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("elapsed_ms");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

namespace detail {

inline std::string md_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  std::string out;
  for (char ch : s) out += ch == '|' ? std::string("\\|") : std::string(1, ch);
  return out;
}

// Arrays of objects render as tables with the union of keys as columns.
inline void md_table(std::ostringstream& out, const json& rows) {
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  out << "|";
  for (const auto& c : cols) out << " " << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) out << "---|";
  out << "\n";
  for (const auto& row : rows) {
    out << "|";
    for (const auto& c : cols) out << " " << (row.contains(c) ? md_cell(row.at(c)) : "") << " |";
    out << "\n";
  }
}

inline bool is_row_array(const json& v) {
  return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); });
}

}  // namespace detail

inline std::string report_to_markdown(const AuditReport& report) {
  std::ostringstream out;
  const auto& s = report.summary;
  out << "# Audit report\n\n";
  out << "| total | confirmed | failed | skipped | matched | mismatched |\n|---|---|---|---|---|---|\n";
  out << "| " << s.total << " | " << s.confirmed << " | " << s.failed << " | " << s.skipped << " | " << s.matched
      << " | " << s.mismatched << " |\n\n";
  out << "| id | expected | verdict | matched |\n|---|---|---|---|\n";
  for (const auto& r : report.claims)
    out << "| " << r.id << " | " << to_string(r.expected_status) << " | " << to_string(r.machine_verdict) << " | "
        << (r.matched ? "yes" : "no") << " |\n";
  for (const auto& r : report.claims) {
    if (!r.verifier) continue;
    out << "\n## " << r.id << "\n\n";
    out << "Source: " << r.source << ". Verifier `" << *r.verifier << "`: " << to_string(r.machine_verdict) << ".\n";
    if (!r.detail.empty()) out << "\n" << r.detail << "\n";
    std::vector<std::pair<std::string, json>> tables;
    bool listed = false;
    for (const auto& [k, v] : r.witness.items()) {
      if (detail::is_row_array(v)) {
        tables.emplace_back(k, v);
        continue;
      }
      if (!listed) out << "\n";
      listed = true;
      out << "- " << k << ": " << detail::md_cell(v) << "\n";
    }
    for (const auto& [k, v] : tables) {
      out << "\n### " << k << "\n\n";
      // Nested witnesses inside runs are summarized as JSON cells.
      detail::md_table(out, v);
    }
  }
  return out.str();
}

}  // namespace digitop
