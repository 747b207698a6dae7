#include "conntest/verdict_json.hpp"

namespace conntest {

nlohmann::json to_json(const SquareRef& square) {
  return {{"level", square.level}, {"k", square.k}, {"origin", {square.u, square.v}}};
}

nlohmann::json to_json(PixelCoord p) { return nlohmann::json::array({p.x, p.y}); }

nlohmann::json to_json(const Verdict& verdict) {
  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["decision"] = to_string(verdict.decision);
  j["variant"] = to_string(verdict.variant);
  j["eps"] = verdict.eps.to_string();
  j["side"] = verdict.side;
  j["seed"] = verdict.seed;
  j["queriesUsed"] = verdict.queries.total;
  j["step1Queries"] = verdict.queries.step1;
  j["perLevelQueries"] = verdict.queries.per_level;
  j["bfsSizes"] = verdict.queries.bfs_sizes;
  j["budgetExhausted"] = verdict.budget_exhausted;
  if (verdict.witness) {
    const auto& w = *verdict.witness;
    nlohmann::json cert = nlohmann::json::array();
    for (const auto& p : w.certificate) cert.push_back(to_json(p));
    j["witness"] = {{"square", to_json(w.square)},
                    {"kind", to_string(w.kind)},
                    {"certificate", std::move(cert)},
                    {"outside", to_json(w.outside_black)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace conntest
