#include "hyopf/grid_document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hyopf {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DocumentError(where + ": " + what);
}

const json& field(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

Complex complex_value(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) fail(where, "expected [re, im]");
  return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

Polygon polygon(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of [p, q, offset]");
  Polygon out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto at = where + "[" + std::to_string(k) + "]";
    if (!v[k].is_array() || v[k].size() != 3) fail(at, "expected [p, q, offset]");
    out.push_back({number(v[k][0], at), number(v[k][1], at), number(v[k][2], at)});
  }
  return out;
}

PwlCost cost(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of [x, y]");
  PwlCost out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto at = where + "[" + std::to_string(k) + "]";
    if (!v[k].is_array() || v[k].size() != 2) fail(at, "expected [x, y]");
    out.points.push_back({number(v[k][0], at), number(v[k][1], at)});
  }
  return out;
}

// Reads the optional fields present in `obj`, stores unknown ones as raw JSON.
class Record {
 public:
  Record(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj.is_object()) fail(where_, "expected an object");
  }

  const json* get(const char* key) {
    known_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  const json& require(const char* key) {
    known_.insert(key);
    return field(obj_, where_, key);
  }
  std::string at(const char* key) const { return where_ + "." + key; }

  void read(const char* key, double& out) {
    if (auto* v = get(key)) out = number(*v, at(key));
  }
  void read(const char* key, Complex& out) {
    if (auto* v = get(key)) out = complex_value(*v, at(key));
  }
  void read(const char* key, Polygon& out) {
    if (auto* v = get(key)) out = polygon(*v, at(key));
  }
  void read(const char* key, PwlCost& out) {
    if (auto* v = get(key)) out = cost(*v, at(key));
  }
  int id(const char* key) { return integer(require(key), at(key)); }

  Annotations rest() const {
    Annotations out;
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.count(it.key())) out[it.key()] = it.value().dump();
    }
    return out;
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> known_;
};

const json& array(const json& doc, const char* key) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) fail(key, "expected an array");
  return *it;
}

void check_id(int id, std::size_t k, const std::string& where) {
  if (id != static_cast<int>(k + 1)) {
    fail(where + ".id", "expected " + std::to_string(k + 1) + " (ids are 1-based positions)");
  }
}

ordered complex_json(Complex z) { return ordered::array({z.real(), z.imag()}); }

ordered polygon_json(const Polygon& poly) {
  ordered out = ordered::array();
  for (const auto& h : poly) out.push_back(ordered::array({h.p, h.q, h.offset}));
  return out;
}

ordered cost_json(const PwlCost& c) {
  ordered out = ordered::array();
  for (const auto& b : c.points) out.push_back(ordered::array({b.x, b.y}));
  return out;
}

void put_annotations(ordered& obj, const Annotations& extra) {
  for (const auto& [key, raw] : extra) {
    obj[key] = ordered::parse(raw);
  }
}

}  // namespace

Grid read_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(std::string("document: invalid JSON: ") + e.what());
  }
  Record top(doc, "document");
  const json& version = top.require("version");
  if (!version.is_string() || version.get<std::string>() != kDocumentVersion) {
    fail("document.version", "unsupported schema version " + version.dump() + ", expected \"" +
                                 kDocumentVersion + "\"");
  }
  Grid grid;
  grid.base_mva = number(top.require("base_mva"), "document.base_mva");

  top.get("buses");
  const auto& buses = array(doc, "buses");
  for (std::size_t k = 0; k < buses.size(); ++k) {
    const auto where = "buses[" + std::to_string(k) + "]";
    Record r(buses[k], where);
    Bus b;
    b.id = r.id("id");
    check_id(b.id, k, where);
    const json& kind = r.require("kind");
    if (kind == "ac") {
      b.kind = BusKind::ac;
    } else if (kind == "dc") {
      b.kind = BusKind::dc;
    } else {
      fail(r.at("kind"), "expected \"ac\" or \"dc\"");
    }
    r.read("shunt", b.shunt);
    r.read("v_min", b.v_min);
    r.read("v_max", b.v_max);
    r.read("load", b.load);
    b.annotations = r.rest();
    grid.buses.push_back(std::move(b));
  }

  top.get("branches");
  const auto& branches = array(doc, "branches");
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto where = "branches[" + std::to_string(k) + "]";
    Record r(branches[k], where);
    Branch b;
    b.id = r.id("id");
    check_id(b.id, k, where);
    b.src = r.id("src");
    b.dst = r.id("dst");
    b.y_series = complex_value(r.require("y_series"), r.at("y_series"));
    r.read("y_src", b.y_src);
    r.read("y_dst", b.y_dst);
    r.read("rho_src", b.rho_src);
    r.read("rho_dst", b.rho_dst);
    r.read("i_max_src", b.i_max_src);
    r.read("i_max_dst", b.i_max_dst);
    r.read("drop_min", b.drop_min);
    r.read("drop_max", b.drop_max);
    r.read("angle_min", b.angle_min);
    r.read("angle_max", b.angle_max);
    b.annotations = r.rest();
    grid.branches.push_back(std::move(b));
  }

  top.get("converters");
  const auto& converters = array(doc, "converters");
  for (std::size_t k = 0; k < converters.size(); ++k) {
    const auto where = "converters[" + std::to_string(k) + "]";
    Record r(converters[k], where);
    Converter c;
    c.id = r.id("id");
    check_id(c.id, k, where);
    c.src = r.id("src");
    c.dst = r.id("dst");
    r.read("loss_fwd", c.loss_fwd);
    r.read("loss_bwd", c.loss_bwd);
    r.read("static_loss", c.static_loss);
    if (auto* side = r.get("static_loss_side")) {
      if (*side == "src") {
        c.static_loss_side = Side::src;
      } else if (*side == "dst") {
        c.static_loss_side = Side::dst;
      } else {
        fail(r.at("static_loss_side"), "expected \"src\" or \"dst\"");
      }
    }
    r.read("cap_src", c.cap_src);
    r.read("cap_dst", c.cap_dst);
    c.annotations = r.rest();
    grid.converters.push_back(std::move(c));
  }

  top.get("injectors");
  const auto& injectors = array(doc, "injectors");
  for (std::size_t k = 0; k < injectors.size(); ++k) {
    const auto where = "injectors[" + std::to_string(k) + "]";
    Record r(injectors[k], where);
    Injector inj;
    inj.id = r.id("id");
    check_id(inj.id, k, where);
    inj.bus = r.id("bus");
    inj.capability = polygon(r.require("capability"), r.at("capability"));
    r.read("cost_p", inj.cost_p);
    r.read("cost_q", inj.cost_q);
    inj.annotations = r.rest();
    grid.injectors.push_back(std::move(inj));
  }
  grid.annotations = top.rest();
  return grid;
}

std::string write_document(const Grid& grid) {
  ordered doc;
  doc["version"] = kDocumentVersion;
  doc["base_mva"] = grid.base_mva;
  ordered buses = ordered::array();
  for (const auto& b : grid.buses) {
    ordered o;
    o["id"] = b.id;
    o["kind"] = to_string(b.kind);
    o["shunt"] = complex_json(b.shunt);
    o["v_min"] = b.v_min;
    o["v_max"] = b.v_max;
    o["load"] = complex_json(b.load);
    put_annotations(o, b.annotations);
    buses.push_back(std::move(o));
  }
  doc["buses"] = std::move(buses);
  ordered branches = ordered::array();
  for (const auto& b : grid.branches) {
    ordered o;
    o["id"] = b.id;
    o["src"] = b.src;
    o["dst"] = b.dst;
    o["y_series"] = complex_json(b.y_series);
    o["y_src"] = complex_json(b.y_src);
    o["y_dst"] = complex_json(b.y_dst);
    o["rho_src"] = complex_json(b.rho_src);
    o["rho_dst"] = complex_json(b.rho_dst);
    o["i_max_src"] = b.i_max_src;
    o["i_max_dst"] = b.i_max_dst;
    o["drop_min"] = b.drop_min;
    o["drop_max"] = b.drop_max;
    o["angle_min"] = b.angle_min;
    o["angle_max"] = b.angle_max;
    put_annotations(o, b.annotations);
    branches.push_back(std::move(o));
  }
  doc["branches"] = std::move(branches);
  ordered converters = ordered::array();
  for (const auto& c : grid.converters) {
    ordered o;
    o["id"] = c.id;
    o["src"] = c.src;
    o["dst"] = c.dst;
    o["loss_fwd"] = c.loss_fwd;
    o["loss_bwd"] = c.loss_bwd;
    o["static_loss"] = c.static_loss;
    o["static_loss_side"] = to_string(c.static_loss_side);
    o["cap_src"] = polygon_json(c.cap_src);
    o["cap_dst"] = polygon_json(c.cap_dst);
    put_annotations(o, c.annotations);
    converters.push_back(std::move(o));
  }
  doc["converters"] = std::move(converters);
  ordered injectors = ordered::array();
  for (const auto& inj : grid.injectors) {
    ordered o;
    o["id"] = inj.id;
    o["bus"] = inj.bus;
    o["capability"] = polygon_json(inj.capability);
    o["cost_p"] = cost_json(inj.cost_p);
    o["cost_q"] = cost_json(inj.cost_q);
    put_annotations(o, inj.annotations);
    injectors.push_back(std::move(o));
  }
  doc["injectors"] = std::move(injectors);
  put_annotations(doc, grid.annotations);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

Grid load_document(const std::filesystem::path& path) { return read_document(read_text_file(path)); }

void save_document(const Grid& grid, const std::filesystem::path& path) {
  write_text_file(path, write_document(grid));
}

}  // namespace hyopf
