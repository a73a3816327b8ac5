#include "hyopf/matpower.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>

namespace hyopf {
namespace {

// Column indices (0-based) of the MATPOWER tables.
namespace bus_col {
constexpr int id = 0, type = 1, pd = 2, qd = 3, gs = 4, bs = 5, vmax = 11, vmin = 12;
}
namespace gen_col {
constexpr int bus = 0, qmax = 3, qmin = 4, status = 7, pmax = 8, pmin = 9;
}
namespace branch_col {
constexpr int from = 0, to = 1, r = 2, x = 3, b = 4, rate_a = 5, tap = 8, shift = 9,
              status = 10, angmin = 11, angmax = 12;
}

struct Source {
  std::string text;  // comments blanked out, offsets preserved

  int line_at(std::size_t pos) const {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
  }
};

Source strip_comments(const std::string& raw) {
  Source out{raw};
  bool comment = false;
  bool quoted = false;
  for (auto& ch : out.text) {
    if (ch == '\n') {
      comment = false;
      quoted = false;
      continue;
    }
    if (comment) {
      ch = ' ';
    } else if (ch == '\'') {
      quoted = !quoted;
    } else if (ch == '%' && !quoted) {
      comment = true;
      ch = ' ';
    }
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; }

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;
};

Table parse_matrix(const Source& src, std::size_t begin, std::size_t end, const std::string& name) {
  Table out;
  std::vector<double> row;
  int row_line = 0;
  auto flush = [&] {
    if (!row.empty()) {
      out.rows.push_back(std::move(row));
      out.lines.push_back(row_line);
      row.clear();
    }
  };
  std::size_t i = begin;
  while (i < end) {
    const char c = src.text[i];
    if (c == ';' || c == '\n') {
      flush();
      ++i;
      continue;
    }
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (src.text.compare(i, 3, "...") == 0) {
      // Continuation: skip to the next line without ending the row.
      while (i < end && src.text[i] != '\n') ++i;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < end && !is_space(src.text[j]) && src.text[j] != ';' && src.text[j] != '\n') ++j;
    const std::string token = src.text.substr(i, j - i);
    char* stop = nullptr;
    const double value = std::strtod(token.c_str(), &stop);
    if (stop != token.c_str() + token.size()) {
      throw MatpowerError(name + " row " + std::to_string(out.rows.size() + 1) + " (line " +
                          std::to_string(src.line_at(i)) + "): non-numeric cell '" + token + "'");
    }
    if (row.empty()) row_line = src.line_at(i);
    row.push_back(value);
    i = j;
  }
  flush();
  return out;
}

Eigen::MatrixXd to_matrix(const Table& t, const std::string& name, int min_columns) {
  if (t.rows.empty()) return {};
  const auto width = t.rows.front().size();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto where = name + " row " + std::to_string(r + 1) + " (line " +
                       std::to_string(t.lines[r]) + ")";
    if (static_cast<int>(row.size()) < min_columns) {
      throw MatpowerError(where + ": expected at least " + std::to_string(min_columns) +
                          " columns, found " + std::to_string(row.size()));
    }
    if (row.size() != width) {
      throw MatpowerError(where + ": expected " + std::to_string(width) + " columns, found " +
                          std::to_string(row.size()));
    }
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.rows[r][c];
    }
  }
  return m;
}

std::size_t find_closing(const Source& src, std::size_t open, char close, const std::string& name) {
  const auto pos = src.text.find(close, open + 1);
  if (pos == std::string::npos) {
    throw MatpowerError("mpc." + name + " (line " + std::to_string(src.line_at(open)) +
                        "): missing '" + std::string(1, close) + "'");
  }
  return pos;
}

void check_gencost(const Eigen::MatrixXd& gencost) {
  for (Eigen::Index r = 0; r < gencost.rows(); ++r) {
    const auto where = "gencost row " + std::to_string(r + 1);
    if (gencost.cols() < 4) {
      throw MatpowerError(where + ": expected at least 4 columns, found " +
                          std::to_string(gencost.cols()));
    }
    const int model = static_cast<int>(gencost(r, 0));
    const auto n = static_cast<Eigen::Index>(gencost(r, 3));
    if (model != 1 && model != 2) {
      throw MatpowerError(where + ": unknown cost model " + std::to_string(model));
    }
    const auto need = 4 + (model == 1 ? 2 * n : n);
    if (n < 0 || gencost.cols() < need) {
      throw MatpowerError(where + ": expected at least " + std::to_string(need) +
                          " columns, found " + std::to_string(gencost.cols()));
    }
  }
}

// Angle limit in radians; 0 and |deg| >= 360 mean unlimited.
double angle_limit(double deg, double unlimited) {
  if (deg == 0.0 || std::abs(deg) >= 360.0) return unlimited;
  return std::clamp(deg * std::numbers::pi / 180.0, -kMaxAngle, kMaxAngle);
}

PwlCost gencost_row(const Eigen::MatrixXd& gencost, Eigen::Index r, double lo, double hi,
                    double base, int samples) {
  const int model = static_cast<int>(gencost(r, 0));
  const auto n = static_cast<Eigen::Index>(gencost(r, 3));
  PwlCost out;
  if (model == 1) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out.points.push_back({gencost(r, 4 + 2 * k) / base, gencost(r, 5 + 2 * k)});
    }
    return out;
  }
  if (n == 0) return out;
  std::vector<double> coeffs;
  for (Eigen::Index k = 0; k < n; ++k) coeffs.push_back(gencost(r, 4 + k));
  out = linearize_polynomial(coeffs, lo, hi, samples);
  for (auto& p : out.points) p.x /= base;
  return out;
}

}  // namespace

MatpowerCase parse_matpower(const std::string& text) {
  const Source src = strip_comments(text);
  MatpowerCase out;
  std::optional<double> base;
  std::map<std::string, Table> tables;
  const std::string key = "mpc.";
  std::size_t pos = 0;
  while ((pos = src.text.find(key, pos)) != std::string::npos) {
    std::size_t i = pos + key.size();
    std::size_t j = i;
    while (j < src.text.size() && (std::isalnum(static_cast<unsigned char>(src.text[j])) ||
                                   src.text[j] == '_')) {
      ++j;
    }
    const std::string name = src.text.substr(i, j - i);
    while (j < src.text.size() && is_space(src.text[j])) ++j;
    if (j >= src.text.size() || src.text[j] != '=' || name.empty()) {
      pos = j;
      continue;
    }
    ++j;
    while (j < src.text.size() && (is_space(src.text[j]) || src.text[j] == '\n')) ++j;
    if (j >= src.text.size()) break;
    std::size_t next = 0;
    if (src.text[j] == '[') {
      const auto close = find_closing(src, j, ']', name);
      if (name == "bus" || name == "gen" || name == "branch" || name == "gencost") {
        tables[name] = parse_matrix(src, j + 1, close, name);
      } else {
        out.warnings.push_back("ignored section mpc." + name);
      }
      next = close + 1;
    } else if (src.text[j] == '{') {
      out.warnings.push_back("ignored section mpc." + name);
      next = find_closing(src, j, '}', name) + 1;
    } else {
      auto stop = src.text.find_first_of(";\n", j);
      if (stop == std::string::npos) stop = src.text.size();
      std::string value = src.text.substr(j, stop - j);
      while (!value.empty() && is_space(value.back())) value.pop_back();
      if (name == "baseMVA") {
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size()) {
          throw MatpowerError("mpc.baseMVA (line " + std::to_string(src.line_at(j)) +
                              "): non-numeric value '" + value + "'");
        }
        base = v;
      } else if (name != "version") {
        out.warnings.push_back("ignored section mpc." + name);
      }
      next = stop;
    }
    pos = next;
  }
  if (!base) throw MatpowerError("missing mandatory assignment mpc.baseMVA");
  if (!(*base > 0.0)) throw MatpowerError("mpc.baseMVA must be positive");
  out.base_mva = *base;
  for (const char* name : {"bus", "gen", "branch"}) {
    if (!tables.count(name)) {
      throw MatpowerError(std::string("missing mandatory table mpc.") + name);
    }
  }
  out.bus = to_matrix(tables["bus"], "bus", kBusColumns);
  out.gen = to_matrix(tables["gen"], "gen", kGenColumns);
  out.branch = to_matrix(tables["branch"], "branch", kBranchColumns);
  if (tables.count("gencost")) {
    out.gencost = to_matrix(tables["gencost"], "gencost", 4);
    check_gencost(out.gencost);
  }
  return out;
}

PwlCost linearize_polynomial(const std::vector<double>& coeffs, double lo, double hi,
                             int samples) {
  if (!(lo <= hi)) throw ParameterError("linearize_polynomial: empty interval");
  auto eval = [&](double x) {
    double y = 0.0;
    for (double c : coeffs) y = y * x + c;
    return y;
  };
  PwlCost out;
  if (lo == hi) {
    out.points.push_back({lo, eval(lo)});
    return out;
  }
  if (samples < 2) throw ParameterError("linearize_polynomial: need at least 2 samples");
  for (int k = 0; k < samples; ++k) {
    const double x = k + 1 == samples ? hi : lo + (hi - lo) * k / (samples - 1);
    out.points.push_back({x, eval(x)});
  }
  return out;
}

Grid to_grid(const MatpowerCase& mpc, int samples) {
  Grid grid;
  const double base = mpc.base_mva;
  grid.base_mva = base;
  std::map<int, int> index;  // MATPOWER number -> 1-based id
  for (Eigen::Index r = 0; r < mpc.bus.rows(); ++r) {
    const int number = static_cast<int>(mpc.bus(r, bus_col::id));
    if (index.count(number)) {
      throw MatpowerError("bus row " + std::to_string(r + 1) + ": duplicate bus number " +
                          std::to_string(number));
    }
    if (static_cast<int>(mpc.bus(r, bus_col::type)) == 4) {
      index[number] = 0;
      continue;
    }
    Bus b;
    b.id = static_cast<int>(grid.buses.size()) + 1;
    b.kind = BusKind::ac;
    b.shunt = Complex(mpc.bus(r, bus_col::gs), mpc.bus(r, bus_col::bs)) / base;
    b.load = Complex(mpc.bus(r, bus_col::pd), mpc.bus(r, bus_col::qd)) / base;
    b.v_min = mpc.bus(r, bus_col::vmin);
    b.v_max = mpc.bus(r, bus_col::vmax);
    if (!(b.v_min < b.v_max)) {
      throw ParameterError("bus " + std::to_string(number) + ": Vmin >= Vmax");
    }
    b.annotations["matpower_bus"] = std::to_string(number);
    index[number] = b.id;
    grid.buses.push_back(std::move(b));
  }
  auto lookup = [&](double number, const std::string& where) {
    auto it = index.find(static_cast<int>(number));
    if (it == index.end()) {
      throw MatpowerError(where + ": unknown bus " + std::to_string(static_cast<int>(number)));
    }
    return it->second;
  };

  for (Eigen::Index r = 0; r < mpc.branch.rows(); ++r) {
    const auto where = "branch row " + std::to_string(r + 1);
    const int from = lookup(mpc.branch(r, branch_col::from), where);
    const int to = lookup(mpc.branch(r, branch_col::to), where);
    if (mpc.branch(r, branch_col::status) == 0.0 || from == 0 || to == 0) continue;
    const Complex z(mpc.branch(r, branch_col::r), mpc.branch(r, branch_col::x));
    if (z == Complex(0.0, 0.0)) throw ParameterError(where + ": zero series impedance");
    double ratio = mpc.branch(r, branch_col::tap);
    if (ratio == 0.0) ratio = 1.0;
    const Complex tap = std::polar(ratio, mpc.branch(r, branch_col::shift) * std::numbers::pi / 180.0);
    const Complex rho = 1.0 / tap;
    if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag()) || std::abs(rho) == 0.0) {
      throw ParameterError(where + ": tap ratio and shift give a zero voltage ratio");
    }
    Branch br;
    br.id = static_cast<int>(grid.branches.size()) + 1;
    br.src = from;
    br.dst = to;
    br.y_series = 1.0 / z;
    br.y_src = br.y_dst = Complex(0.0, mpc.branch(r, branch_col::b) / 2.0);
    br.rho_src = rho;
    br.rho_dst = 1.0;
    const double rate = mpc.branch(r, branch_col::rate_a);
    br.i_max_src = br.i_max_dst = rate > 0.0 ? rate / base : kUnlimitedAmpacity;
    br.angle_min = angle_limit(mpc.branch(r, branch_col::angmin), -kMaxAngle);
    br.angle_max = angle_limit(mpc.branch(r, branch_col::angmax), kMaxAngle);
    if (!(br.angle_min < br.angle_max)) {
      throw ParameterError(where + ": empty angle difference range");
    }
    br.annotations["matpower_row"] = std::to_string(r + 1);
    grid.branches.push_back(std::move(br));
  }

  const auto ng = mpc.gen.rows();
  if (mpc.gencost.rows() != 0 && mpc.gencost.rows() < ng) {
    throw MatpowerError("gencost has " + std::to_string(mpc.gencost.rows()) +
                        " rows for " + std::to_string(ng) + " generators");
  }
  const bool reactive_costs = mpc.gencost.rows() >= 2 * ng && ng > 0;
  for (Eigen::Index r = 0; r < ng; ++r) {
    const auto where = "gen row " + std::to_string(r + 1);
    const int bus = lookup(mpc.gen(r, gen_col::bus), where);
    if (mpc.gen(r, gen_col::status) <= 0.0 || bus == 0) continue;
    const double pmin = mpc.gen(r, gen_col::pmin), pmax = mpc.gen(r, gen_col::pmax);
    const double qmin = mpc.gen(r, gen_col::qmin), qmax = mpc.gen(r, gen_col::qmax);
    if (pmin > pmax || qmin > qmax) throw ParameterError(where + ": empty capability box");
    Injector inj;
    inj.id = static_cast<int>(grid.injectors.size()) + 1;
    inj.bus = bus;
    inj.capability = box_polygon(pmin / base, pmax / base, qmin / base, qmax / base);
    if (mpc.gencost.rows() != 0) {
      inj.cost_p = gencost_row(mpc.gencost, r, pmin, pmax, base, samples);
      if (reactive_costs) {
        inj.cost_q = gencost_row(mpc.gencost, ng + r, qmin, qmax, base, samples);
      }
    }
    inj.annotations["matpower_gen"] = std::to_string(r + 1);
    grid.injectors.push_back(std::move(inj));
  }
  return grid;
}

}  // namespace hyopf
