#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

#include "hyopf/grid_document.hpp"

#ifndef HYOPF_TEST_DATA_DIR
#error "HYOPF_TEST_DATA_DIR must point at the data directory"
#endif

namespace hyopf::testing {

int GridBuilder::bus(BusKind kind, Complex load, double v_min, double v_max, Complex shunt) {
  Bus b;
  b.id = static_cast<int>(grid_.buses.size()) + 1;
  b.kind = kind;
  b.load = load;
  b.v_min = v_min;
  b.v_max = v_max;
  b.shunt = shunt;
  grid_.buses.push_back(b);
  return b.id;
}

int GridBuilder::line(int src, int dst, Complex z, double b, double i_max) {
  Branch br;
  br.id = static_cast<int>(grid_.branches.size()) + 1;
  br.src = src;
  br.dst = dst;
  br.y_series = 1.0 / z;
  br.y_src = br.y_dst = Complex(0.0, b / 2.0);
  br.i_max_src = br.i_max_dst = i_max;
  br.angle_min = -0.6;
  br.angle_max = 0.6;
  grid_.branches.push_back(br);
  return br.id;
}

int GridBuilder::cable(int src, int dst, double r, double i_max) {
  Branch br;
  br.id = static_cast<int>(grid_.branches.size()) + 1;
  br.src = src;
  br.dst = dst;
  br.y_series = 1.0 / r;
  br.i_max_src = br.i_max_dst = i_max;
  grid_.branches.push_back(br);
  return br.id;
}

int GridBuilder::converter(int src, int dst, double rating, double loss, double q,
                           double static_loss) {
  Converter cv;
  cv.id = static_cast<int>(grid_.converters.size()) + 1;
  cv.src = src;
  cv.dst = dst;
  cv.loss_fwd = cv.loss_bwd = loss;
  cv.static_loss = static_loss;
  cv.cap_src = box_polygon(-rating, rating, -q, q);
  cv.cap_dst = box_polygon(-rating, rating, -q, q);
  grid_.converters.push_back(cv);
  return cv.id;
}

int GridBuilder::gen(int bus, double p_min, double p_max, double q_min, double q_max,
                     PwlCost cost_p, PwlCost cost_q) {
  Injector inj;
  inj.id = static_cast<int>(grid_.injectors.size()) + 1;
  inj.bus = bus;
  inj.capability = box_polygon(p_min, p_max, q_min, q_max);
  inj.cost_p = std::move(cost_p);
  inj.cost_q = std::move(cost_q);
  grid_.injectors.push_back(inj);
  return inj.id;
}

PwlCost linear_cost(double slope, double lo, double hi) {
  return PwlCost{{{lo, slope * lo}, {hi, slope * hi}}};
}

std::string data_path(const std::string& relative) {
  return std::string(HYOPF_TEST_DATA_DIR) + "/" + relative;
}

Grid load_case(const std::string& name) { return load_document(data_path("cases/" + name + ".json")); }

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

PwlCost random_cost(std::mt19937_64& rng, double lo, double hi) {
  const double mid = uniform(rng, lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo));
  const double s1 = uniform(rng, 5.0, 15.0);
  const double s2 = s1 + uniform(rng, 0.0, 10.0);
  const double y0 = uniform(rng, 0.0, 2.0);
  const double y1 = y0 + s1 * (mid - lo);
  return PwlCost{{{lo, y0}, {mid, y1}, {hi, y1 + s2 * (hi - mid)}}};
}

}  // namespace

Grid random_grid(std::mt19937_64& rng, const RandomGridOptions& options) {
  const int n = pick(rng, options.min_buses, options.max_buses);
  int dc_count = 0;
  if (options.allow_dc && options.allow_converters && n >= 3 && coin(rng, 0.5)) {
    dc_count = pick(rng, 1, std::min(3, n - 2));
  }
  const int ac_count = n - dc_count;
  int ac_groups = 1;
  if (options.allow_converters && ac_count >= 2 && coin(rng, 0.4)) ac_groups = 2;

  // Subgrid membership, AC groups first.
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(ac_groups));
  GridBuilder g;
  for (int i = 0; i < ac_count; ++i) {
    const int id = g.bus(BusKind::ac, {}, 0.9, 1.1);
    groups[static_cast<std::size_t>(i == 0 ? 0 : (ac_groups == 2 && i == ac_count - 1
                                                       ? 1
                                                       : pick(rng, 0, ac_groups - 1)))]
        .push_back(id);
  }
  std::vector<int> dc_buses;
  for (int i = 0; i < dc_count; ++i) dc_buses.push_back(g.bus(BusKind::dc, {}, 0.9, 1.1));

  auto random_line = [&](int a, int b) {
    const Complex z(uniform(rng, 0.005, 0.03), uniform(rng, 0.02, 0.1));
    const int id = g.line(a, b, z, uniform(rng, 0.0, 0.04), 5.0);
    auto& br = g.branch(id);
    if (coin(rng, 0.25)) {
      br.rho_src = 1.0 / std::polar(uniform(rng, 0.95, 1.05), uniform(rng, -0.1, 0.1));
    }
    br.angle_min = -uniform(rng, 0.4, 1.2);
    br.angle_max = uniform(rng, 0.4, 1.2);
    return id;
  };

  for (auto& members : groups) {
    for (std::size_t i = 1; i < members.size(); ++i) {
      const int parent = members[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(i) - 1))];
      const int id = random_line(parent, members[i]);
      if (options.allow_parallel && coin(rng, 0.15)) {
        const auto copy = g.branch(id);
        random_line(copy.src, copy.dst);
      }
    }
    if (options.allow_mesh && members.size() >= 3 && coin(rng, 0.4)) {
      random_line(members.front(), members.back());
    }
  }
  for (std::size_t i = 1; i < dc_buses.size(); ++i) {
    const int parent = dc_buses[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(i) - 1))];
    g.cable(parent, dc_buses[i], uniform(rng, 0.005, 0.03), 5.0);
  }

  auto any_of = [&](const std::vector<int>& members) {
    return members[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(members.size()) - 1))];
  };
  auto random_converter = [&](int src, int dst) {
    g.converter(src, dst, 3.0, uniform(rng, 0.01, 0.05), 1.0,
                coin(rng, 0.3) ? uniform(rng, 0.0, 0.01) : 0.0);
  };
  if (ac_groups == 2) random_converter(any_of(groups[0]), any_of(groups[1]));
  if (!dc_buses.empty()) {
    random_converter(any_of(groups[0]), any_of(dc_buses));
    if (ac_groups == 2 && coin(rng, 0.5)) random_converter(any_of(dc_buses), any_of(groups[1]));
  }

  for (auto& bus : g.grid().buses) {
    if (!coin(rng, 0.6)) continue;
    const double p = uniform(rng, 0.05, 0.3);
    bus.load = bus.kind == BusKind::dc ? Complex(p, 0.0) : Complex(p, uniform(rng, 0.0, 0.1));
  }
  for (const auto& members : groups) {
    const int bus = any_of(members);
    g.gen(bus, 0.0, 3.0, -2.0, 2.0, random_cost(rng, 0.0, 3.0));
    if (coin(rng, 0.3)) g.gen(any_of(members), 0.0, 1.0, -1.0, 1.0, random_cost(rng, 0.0, 1.0));
  }
  if (!dc_buses.empty() && coin(rng, 0.3)) {
    g.gen(any_of(dc_buses), 0.0, 0.5, 0.0, 0.0, random_cost(rng, 0.0, 0.5));
  }
  return g.build();
}

}  // namespace hyopf::testing
