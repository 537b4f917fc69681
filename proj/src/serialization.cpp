#include "flcc/serialization.hpp"

#include <cmath>
#include <sstream>

#include "flcc/errors.hpp"

namespace flcc {

using nlohmann::json;

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Flpm: return "flpm";
    case InstanceKind::Ncc: return "ncc";
    case InstanceKind::Sirpfl: return "sirpfl";
  }
  return "?";
}

InstanceKind instance_kind_from_string(std::string_view s) {
  if (s == "flpm") return InstanceKind::Flpm;
  if (s == "ncc") return InstanceKind::Ncc;
  if (s == "sirpfl") return InstanceKind::Sirpfl;
  throw ValidationError("kind", "unknown instance kind '" + std::string(s) + "'");
}

json number_or_inf(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

double number_or_inf(const json& v, const std::string& field) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw ValidationError(field, "expected a number or \"inf\"");
  }
  if (!v.is_number()) throw ValidationError(field, "expected a number");
  return v.get<double>();
}

namespace {

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field, "expected a number");
  return v.get<double>();
}

const json& require(const json& obj, const char* key, const std::string& at) {
  if (!obj.is_object()) throw ValidationError(at, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(at.empty() ? key : at + "." + key, "missing");
  return *it;
}

std::string id_of(const json& obj, const std::string& at) {
  const json& id = require(obj, "id", at);
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw ValidationError(at + ".id", "expected a string or integer");
}

const json& array_field(const json& doc, const char* key, const std::string& at = "") {
  const json& a = require(doc, key, at);
  if (!a.is_array()) throw ValidationError(at.empty() ? key : at + "." + key, "expected an array");
  return a;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void expect_kind(const json& doc, InstanceKind kind) {
  const json& k = require(doc, "kind", "");
  if (!k.is_string()) throw ValidationError("kind", "expected a string");
  if (instance_kind_from_string(k.get<std::string>()) != kind)
    throw ValidationError("kind", "expected \"" + to_string(kind) + "\"");
}

std::vector<Facility> parse_facilities(const json& doc) {
  std::vector<Facility> out;
  const json& arr = array_field(doc, "facilities");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = "facilities[" + std::to_string(i) + "]";
    out.push_back({id_of(arr[i], at), number(require(arr[i], "f", at), at + ".opening_cost")});
  }
  return out;
}

Eigen::MatrixXd parse_matrix(const json& arr, Eigen::Index rows, Eigen::Index cols,
                             const std::string& field) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows)
    throw ValidationError(field, "expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = arr[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(field + "[" + std::to_string(r) + "]",
                            "expected " + std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = number(row[static_cast<std::size_t>(c)],
                       field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json facilities_json(const std::vector<Facility>& facilities) {
  json arr = json::array();
  for (const auto& f : facilities) arr.push_back({{"id", f.id}, {"f", f.opening_cost}});
  return arr;
}

ConcaveFn parse_g(const json& g, const std::string& field) {
  if (!g.is_array()) throw ValidationError(field, "expected a breakpoint list");
  std::vector<Breakpoint> pts;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::string at = field + "[" + std::to_string(k) + "]";
    if (!g[k].is_array() || g[k].size() != 2) throw ValidationError(at, "expected [x, y]");
    pts.push_back({number(g[k][0], at), number(g[k][1], at)});
  }
  return ConcaveFn(std::move(pts), kDefaultTol, field);
}

}  // namespace

FlpmInstance parse_flpm(std::string_view text) {
  const json doc = parse_json(text);
  expect_kind(doc, InstanceKind::Flpm);
  FlpmInstance inst;
  inst.facilities = parse_facilities(doc);
  const json& clients = array_field(doc, "clients");
  for (std::size_t j = 0; j < clients.size(); ++j) {
    const std::string at = "clients[" + std::to_string(j) + "]";
    FlpmClient c{id_of(clients[j], at)};
    if (auto it = clients[j].find("p"); it != clients[j].end())
      c.penalty = number_or_inf(*it, at + ".p");
    if (auto it = clients[j].find("m"); it != clients[j].end())
      c.multiplicity = number(*it, at + ".m");
    inst.clients.push_back(std::move(c));
  }
  inst.dist = parse_matrix(require(doc, "dist", ""), static_cast<Eigen::Index>(inst.clients.size()),
                           static_cast<Eigen::Index>(inst.facilities.size()), "dist");
  validate(inst);
  return inst;
}

NccInstance parse_ncc(std::string_view text) {
  const json doc = parse_json(text);
  expect_kind(doc, InstanceKind::Ncc);
  NccInstance inst;
  inst.facilities = parse_facilities(doc);
  const json& clients = array_field(doc, "clients");
  for (std::size_t j = 0; j < clients.size(); ++j) {
    const std::string at = "clients[" + std::to_string(j) + "]";
    inst.clients.push_back({id_of(clients[j], at), parse_g(require(clients[j], "g", at), at + ".g")});
  }
  inst.dist = parse_matrix(require(doc, "dist", ""), static_cast<Eigen::Index>(inst.clients.size()),
                           static_cast<Eigen::Index>(inst.facilities.size()), "dist");
  validate(inst);
  return inst;
}

SirpflInstance parse_sirpfl(std::string_view text) {
  const json doc = parse_json(text);
  expect_kind(doc, InstanceKind::Sirpfl);
  SirpflInstance inst;
  inst.facilities = parse_facilities(doc);
  const json& T = require(doc, "T", "");
  if (!T.is_number_integer() || T.get<long long>() < 1)
    throw ValidationError("T", "expected a positive integer");
  inst.horizon = static_cast<int>(T.get<long long>());
  if (auto it = doc.find("U"); it != doc.end()) inst.capacity = number_or_inf(*it, "U");
  if (auto it = doc.find("splittable"); it != doc.end()) {
    if (!it->is_boolean()) throw ValidationError("splittable", "expected a boolean");
    inst.splittable = it->get<bool>();
  }
  const Eigen::Index n = inst.horizon;
  const json& clients = array_field(doc, "clients");
  for (std::size_t j = 0; j < clients.size(); ++j) {
    const std::string at = "clients[" + std::to_string(j) + "]";
    SirpflClient c{id_of(clients[j], at), Eigen::VectorXd(n), Eigen::MatrixXd::Zero(n, n)};
    const json& u = array_field(clients[j], "demands", at);
    if (static_cast<Eigen::Index>(u.size()) != n)
      throw ValidationError(at + ".demands", "expected " + std::to_string(n) + " entries");
    for (Eigen::Index t = 0; t < n; ++t)
      c.demands(t) = number(u[static_cast<std::size_t>(t)], at + ".demands[" + std::to_string(t) + "]");
    const json& h = require(clients[j], "holding", at);
    if (h.is_number()) {
      // Shorthand: per-unit-per-day rate, h(s,t) = rate * (t - s).
      for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index t = s; t < n; ++t) c.holding(s, t) = h.get<double>() * double(t - s);
    } else {
      c.holding = parse_matrix(h, n, n, at + ".holding");
      for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index t = 0; t < s; ++t) c.holding(s, t) = 0.0;
    }
    inst.clients.push_back(std::move(c));
  }
  inst.dist = parse_matrix(require(doc, "dist", ""), static_cast<Eigen::Index>(inst.clients.size()),
                           static_cast<Eigen::Index>(inst.facilities.size()), "dist");
  validate(inst);
  return inst;
}

AnyInstance parse_instance(std::string_view text, InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Flpm: return parse_flpm(text);
    case InstanceKind::Ncc: return parse_ncc(text);
    case InstanceKind::Sirpfl: return parse_sirpfl(text);
  }
  throw ValidationError("kind", "unknown");
}

json to_json(const FlpmInstance& inst) {
  json clients = json::array();
  for (const auto& c : inst.clients)
    clients.push_back({{"id", c.id}, {"p", number_or_inf(c.penalty)}, {"m", c.multiplicity}});
  return {{"kind", "flpm"},
          {"facilities", facilities_json(inst.facilities)},
          {"clients", std::move(clients)},
          {"dist", matrix_json(inst.dist)}};
}

json to_json(const NccInstance& inst) {
  json clients = json::array();
  for (const auto& c : inst.clients) {
    json g = json::array();
    for (const auto& bp : c.g.breakpoints()) g.push_back({bp.x, bp.y});
    clients.push_back({{"id", c.id}, {"g", std::move(g)}});
  }
  return {{"kind", "ncc"},
          {"facilities", facilities_json(inst.facilities)},
          {"clients", std::move(clients)},
          {"dist", matrix_json(inst.dist)}};
}

json to_json(const SirpflInstance& inst) {
  json clients = json::array();
  for (const auto& c : inst.clients) {
    json u = json::array();
    for (Eigen::Index t = 0; t < c.demands.size(); ++t) u.push_back(c.demands(t));
    clients.push_back({{"id", c.id}, {"demands", std::move(u)}, {"holding", matrix_json(c.holding)}});
  }
  return {{"kind", "sirpfl"},
          {"facilities", facilities_json(inst.facilities)},
          {"clients", std::move(clients)},
          {"dist", matrix_json(inst.dist)},
          {"T", inst.horizon},
          {"U", number_or_inf(inst.capacity)},
          {"splittable", inst.splittable}};
}

std::string serialize_instance(const AnyInstance& inst) {
  return std::visit([](const auto& x) { return to_json(x).dump(); }, inst);
}

FlpmInstance read_orlib(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> tokens;
  for (std::string tok; in >> tok;) tokens.push_back(tok);
  std::size_t pos = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (pos >= tokens.size())
      throw ParseError(std::string("truncated ORLIB file: expected ") + what);
    return tokens[pos++];
  };
  auto num = [&](const char* what) {
    const std::string& tok = next(what);
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(std::string("ORLIB: bad number '") + tok + "' for " + what);
    }
  };
  auto count = [&](const char* what) {
    const double v = num(what);
    if (v < 1 || v != std::floor(v)) throw ParseError(std::string("ORLIB: bad count for ") + what);
    return static_cast<std::size_t>(v);
  };
  const std::size_t n = count("facility count");
  const std::size_t m = count("client count");
  FlpmInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    next("facility capacity");
    inst.facilities.push_back({std::to_string(i + 1), num("facility opening cost")});
  }
  inst.dist.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < m; ++j) {
    num("client demand");
    inst.clients.push_back({std::to_string(j + 1), kInf, 1.0});
    for (std::size_t i = 0; i < n; ++i)
      inst.dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = num("service cost");
  }
  if (pos != tokens.size())
    throw ParseError("ORLIB: token count mismatch, " + std::to_string(tokens.size() - pos) +
                     " trailing tokens");
  validate(inst);
  inst.metric = bipartite_triangle_ok(inst.dist);
  return inst;
}

}  // namespace flcc
