#include <mutex>

#include "dglab/kinematics.hpp"
#include "json.hpp"

namespace dglab {

namespace {

// Catalog of elementary quantum Borel kinematics.  pi1 is the fundamental
// group of the configuration space, H1/H2 the homology/cohomology groups that
// carry the character and Chern-class quantum numbers.  The JSON text below
// is the canonical resource; the in-memory entries are parsed from it.
const char* kCatalogJson = R"json({
  "entries": [
    {
      "name": "Spinless particle in R^3",
      "configuration_space": "R^3",
      "pi1": "{e}",
      "H1": "0",
      "H2": "0",
      "quantum_numbers": []
    },
    {
      "name": "Aharonov-Bohm configuration",
      "configuration_space": "R^3 \\ R",
      "pi1": "Z",
      "H1": "Z",
      "H2": "0",
      "quantum_numbers": [{"symbol": "theta", "domain": "[0,1)"}]
    },
    {
      "name": "Dirac's monopole",
      "configuration_space": "R^3 \\ O = R_+ x S^2",
      "pi1": "{e}",
      "H1": "0",
      "H2": "Z",
      "quantum_numbers": [{"symbol": "n", "domain": "Z"}]
    },
    {
      "name": "2 distinguishable particles in R^3",
      "configuration_space": "R^3 x R_+ x S^2",
      "pi1": "{e}",
      "H1": "0",
      "H2": "Z",
      "quantum_numbers": [{"symbol": "n", "domain": "Z"}]
    },
    {
      "name": "2 indistinguishable particles in R^3",
      "configuration_space": "R^3 x R_+ x RP^2",
      "pi1": "S_2",
      "H1": "Z_2",
      "H2": "Z_2",
      "quantum_numbers": [{"symbol": "m", "domain": "Z_2"}]
    },
    {
      "name": "Rigid body",
      "configuration_space": "R^3 x SO(3)",
      "pi1": "Z_2",
      "H1": "Z_2",
      "H2": "Z_2",
      "quantum_numbers": [{"symbol": "m", "domain": "Z_2"}]
    },
    {
      "name": "Symmetric top",
      "configuration_space": "S^2",
      "pi1": "{e}",
      "H1": "0",
      "H2": "Z",
      "quantum_numbers": [{"symbol": "n", "domain": "Z"}]
    },
    {
      "name": "Rotator with fixed axis",
      "configuration_space": "S^1",
      "pi1": "Z",
      "H1": "Z",
      "H2": "0",
      "quantum_numbers": [{"symbol": "theta", "domain": "[0,1)"}]
    },
    {
      "name": "Particle on orientable surface of genus p",
      "configuration_space": "K_p",
      "pi1": "pi_1(K_p)",
      "H1": "Z^2p",
      "H2": "Z",
      "quantum_numbers": [
        {"symbol": "n", "domain": "Z"},
        {"symbol": "theta_1..theta_2p", "domain": "[0,1)^2p"}
      ]
    }
  ]
})json";

CatalogEntry entry_from_json(const nlohmann::json& j) {
  CatalogEntry e;
  e.name = j.at("name").get<std::string>();
  e.configuration_space = j.at("configuration_space").get<std::string>();
  e.pi1 = j.at("pi1").get<std::string>();
  e.homology_h1 = j.at("H1").get<std::string>();
  e.cohomology_h2 = j.at("H2").get<std::string>();
  for (const auto& q : j.at("quantum_numbers"))
    e.quantum_numbers.push_back(
        {q.at("symbol").get<std::string>(), q.at("domain").get<std::string>()});
  return e;
}

nlohmann::json entry_to_json(const CatalogEntry& e) {
  nlohmann::json j;
  j["name"] = e.name;
  j["configuration_space"] = e.configuration_space;
  j["pi1"] = e.pi1;
  j["H1"] = e.homology_h1;
  j["H2"] = e.cohomology_h2;
  auto qs = nlohmann::json::array();
  for (const auto& q : e.quantum_numbers) qs.push_back({{"symbol", q.symbol}, {"domain", q.domain}});
  j["quantum_numbers"] = qs;
  return j;
}

}  // namespace

const std::string& catalog_json_resource() {
  static const std::string text = kCatalogJson;
  return text;
}

const std::vector<CatalogEntry>& catalog_list() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    const auto j = nlohmann::json::parse(catalog_json_resource());
    for (const auto& je : j.at("entries")) out.push_back(entry_from_json(je));
    return out;
  }();
  return entries;
}

namespace {

// entry names use plain ASCII hyphens; accept en dashes and "--" in queries
std::string normalise_dashes(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size();) {
    if (s.compare(i, 3, "\xE2\x80\x93") == 0 || s.compare(i, 3, "\xE2\x80\x94") == 0) {
      out += '-';
      i += 3;
    } else if (s.compare(i, 2, "--") == 0) {
      out += '-';
      i += 2;
    } else {
      out += s[i];
      ++i;
    }
  }
  return out;
}

}  // namespace

const CatalogEntry& catalog_lookup(const std::string& name) {
  const std::string wanted = normalise_dashes(name);
  for (const auto& e : catalog_list())
    if (e.name == wanted) return e;
  std::string msg = "unknown catalog entry '" + name + "'; valid names are:";
  for (const auto& e : catalog_list()) msg += "\n  " + e.name;
  throw std::invalid_argument(msg);
}

std::string catalog_entry_to_json(const CatalogEntry& e) { return entry_to_json(e).dump(2); }

}  // namespace dglab
