#include "gyroproxy/commsim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gyroproxy/errors.hpp"

namespace gyroproxy::commsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParameterError("topology: bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

double intra_share(const MachineTopology& topo, std::size_t ranks_per_node) {
  return topo.intra_bandwidth() / static_cast<double>(std::max(ranks_per_node, topo.gpus_per_node));
}

double network_share(const MachineTopology& topo, std::size_t ranks_per_node) {
  double share = topo.nic_bandwidth() / static_cast<double>(std::max(ranks_per_node, topo.nics_per_node));
  if (topo.nic_layout == NicLayout::shared_bus) share /= topo.shared_bus_contention;
  return share;
}

double network_message_latency(const MachineTopology& topo) {
  return topo.network_latency_s +
         (topo.nic_layout == NicLayout::shared_bus ? topo.shared_bus_latency_penalty_s : 0.0);
}

}  // namespace

std::string_view to_string(NicLayout layout) { return layout == NicLayout::shared_bus ? "shared_bus" : "per_gpu"; }

std::string_view to_string(CollectiveKind kind) { return kind == CollectiveKind::alltoall ? "alltoall" : "allreduce"; }

std::string to_string(const Placement& placement) {
  if (placement.kind == PlacementKind::dim1_intra_node) return "dim1_intra_node";
  return "dim1_spread(" + std::to_string(placement.nodes) + ")";
}

void MachineTopology::validate() const {
  if (gpus_per_node == 0 || processes_per_gpu == 0 || intra_links == 0 || nics_per_node == 0) {
    throw ParameterError("topology '" + name + "': counts must be >= 1");
  }
  if (!(intra_link_gbps > 0.0) || !(nic_gbps > 0.0) || !(segment_bytes > 0.0)) {
    throw ParameterError("topology '" + name + "': bandwidths and segment size must be > 0");
  }
  if (!(shared_bus_contention >= 1.0)) throw ParameterError("topology '" + name + "': contention must be >= 1");
  if (shared_bus_latency_penalty_s < 0.0 || intra_latency_s < 0.0 || network_latency_s < 0.0) {
    throw ParameterError("topology '" + name + "': latencies must be >= 0");
  }
}

MachineTopology builtin_topology(std::string_view name) {
  MachineTopology t;
  if (name == "perlmutter_like") {
    t.name = "perlmutter_like";
    t.gpus_per_node = 4;
    t.processes_per_gpu = 1;
    t.intra_links = 4;
    t.intra_link_gbps = 25.0;
    t.nic_layout = NicLayout::shared_bus;
    t.nics_per_node = 4;
    t.nic_gbps = 25.0;
    return t;
  }
  if (name == "frontier_like") {
    t.name = "frontier_like";
    t.gpus_per_node = 4;
    t.processes_per_gpu = 2;
    t.intra_links = 2;
    t.intra_link_gbps = 50.0;
    t.nic_layout = NicLayout::per_gpu;
    t.nics_per_node = 4;
    t.nic_gbps = 25.0;
    return t;
  }
  throw ParameterError("unknown topology '" + std::string(name) + "'; valid topologies: perlmutter_like, frontier_like");
}

std::vector<std::string> builtin_topology_names() { return {"perlmutter_like", "frontier_like"}; }

MachineTopology parse_topology(std::string_view text) {
  MachineTopology t;
  t.name = "custom";
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("topology line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "name") t.name = std::string(value);
    else if (key == "gpus_per_node") t.gpus_per_node = parse_number<std::size_t>(key, value);
    else if (key == "processes_per_gpu") t.processes_per_gpu = parse_number<std::size_t>(key, value);
    else if (key == "intra_links") t.intra_links = parse_number<std::size_t>(key, value);
    else if (key == "intra_link_gbps") t.intra_link_gbps = parse_number<double>(key, value);
    else if (key == "nics_per_node") t.nics_per_node = parse_number<std::size_t>(key, value);
    else if (key == "nic_gbps") t.nic_gbps = parse_number<double>(key, value);
    else if (key == "shared_bus_latency_penalty_s") t.shared_bus_latency_penalty_s = parse_number<double>(key, value);
    else if (key == "shared_bus_contention") t.shared_bus_contention = parse_number<double>(key, value);
    else if (key == "intra_latency_s") t.intra_latency_s = parse_number<double>(key, value);
    else if (key == "network_latency_s") t.network_latency_s = parse_number<double>(key, value);
    else if (key == "segment_bytes") t.segment_bytes = parse_number<double>(key, value);
    else if (key == "nic_layout") {
      if (value == "shared_bus") t.nic_layout = NicLayout::shared_bus;
      else if (value == "per_gpu") t.nic_layout = NicLayout::per_gpu;
      else throw ParameterError("topology: nic_layout must be shared_bus or per_gpu");
    } else {
      throw ParameterError("topology line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  t.validate();
  return t;
}

MachineTopology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topology file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_topology(buffer.str());
}

std::string to_key_value(const MachineTopology& t) {
  std::ostringstream os;
  os.precision(17);
  os << "name=" << t.name << '\n'
     << "gpus_per_node=" << t.gpus_per_node << '\n'
     << "processes_per_gpu=" << t.processes_per_gpu << '\n'
     << "intra_links=" << t.intra_links << '\n'
     << "intra_link_gbps=" << t.intra_link_gbps << '\n'
     << "nic_layout=" << to_string(t.nic_layout) << '\n'
     << "nics_per_node=" << t.nics_per_node << '\n'
     << "nic_gbps=" << t.nic_gbps << '\n'
     << "shared_bus_latency_penalty_s=" << t.shared_bus_latency_penalty_s << '\n'
     << "shared_bus_contention=" << t.shared_bus_contention << '\n'
     << "intra_latency_s=" << t.intra_latency_s << '\n'
     << "network_latency_s=" << t.network_latency_s << '\n'
     << "segment_bytes=" << t.segment_bytes << '\n';
  return os.str();
}

void validate_plan(const CommPlan& plan, const MachineTopology& topo) {
  const std::size_t ranks = plan.total_ranks();
  if (plan.n1 == 0 || plan.n2 == 0 || plan.nodes == 0) throw ParameterError("plan: n1, n2 and nodes must be >= 1");
  if (ranks % plan.nodes != 0) {
    throw ParameterError("plan: " + std::to_string(ranks) + " ranks do not divide evenly over " +
                         std::to_string(plan.nodes) + " nodes");
  }
  const std::size_t rpn = ranks / plan.nodes;
  if (rpn > topo.rank_capacity()) {
    throw ParameterError("plan: " + std::to_string(rpn) + " ranks per node exceed capacity " +
                         std::to_string(topo.rank_capacity()) + " of " + topo.name);
  }
  const std::size_t k = plan.placement.nodes;
  if (plan.placement.kind == PlacementKind::dim1_intra_node) {
    if (k != 1) throw ParameterError("plan: intra-node placement spans exactly one node");
    if (plan.n1 > rpn || rpn % plan.n1 != 0) {
      throw ParameterError("plan: dim-1 group of " + std::to_string(plan.n1) + " does not fit inside a node with " +
                           std::to_string(rpn) + " ranks");
    }
    return;
  }
  if (k < 2 || k > plan.nodes || plan.n1 % k != 0) {
    throw ParameterError("plan: cannot spread a dim-1 group of " + std::to_string(plan.n1) + " over " +
                         std::to_string(k) + " nodes");
  }
  const std::size_t m = plan.n1 / k;
  if (rpn % m != 0) throw ParameterError("plan: spread group slices do not tile a node");
}

GroupGeometry dim1_geometry(const CommPlan& plan) {
  return {plan.n1, plan.n1 / plan.placement.nodes};
}

GroupGeometry dim2_geometry(const CommPlan& plan) {
  const std::size_t m1 = plan.n1 / plan.placement.nodes;
  return {plan.n2, std::max<std::size_t>(1, std::min(plan.n2, plan.ranks_per_node() / m1))};
}

VolumeModel VolumeModel::from_shape(const GridShape& shape) {
  constexpr double kComplexBytes = 16.0;
  return {static_cast<double>(shape.element_count()) * kComplexBytes,
          static_cast<double>(shape.field_size()) * kComplexBytes};
}

double alltoall_volume(const VolumeModel& vm, const CommPlan& plan) {
  const double n1 = static_cast<double>(plan.n1);
  return vm.state_bytes / static_cast<double>(plan.total_ranks()) * (n1 - 1.0) / n1;
}

double allreduce_volume(const VolumeModel& vm, const CommPlan& plan) {
  const double n2 = static_cast<double>(plan.n2);
  return vm.field_bytes_base * n2 / static_cast<double>(plan.total_ranks()) * 2.0 * (n2 - 1.0) / n2;
}

double collective_time(CollectiveKind kind, double bytes_per_rank, const GroupGeometry& group,
                       std::size_t ranks_per_node, const MachineTopology& topo) {
  if (group.size <= 1) return 0.0;
  const double g = static_cast<double>(group.size);
  const double m = static_cast<double>(std::min(group.per_node, group.size));
  const double intra_bw = intra_share(topo, ranks_per_node);
  const double net_bw = network_share(topo, ranks_per_node);
  const double net_latency = network_message_latency(topo);

  if (kind == CollectiveKind::alltoall) {
    const double intra_msgs = m - 1.0;
    const double inter_msgs = g - m;
    const double intra_bytes = bytes_per_rank * intra_msgs / (g - 1.0);
    const double inter_bytes = bytes_per_rank * inter_msgs / (g - 1.0);
    return intra_msgs * topo.intra_latency_s + inter_msgs * net_latency + intra_bytes / intra_bw +
           inter_bytes / net_bw;
  }

  const bool leaves_node = group.per_node < group.size;
  const double rounds = std::max(1.0, std::ceil(bytes_per_rank / topo.segment_bytes));
  const double messages = 2.0 * (g - 1.0) * rounds;
  const double latency = leaves_node ? net_latency : topo.intra_latency_s;
  const double bandwidth = leaves_node ? std::min(intra_bw, net_bw) : intra_bw;
  return messages * latency + bytes_per_rank / bandwidth;
}

double collective_time(CollectiveKind kind, double bytes_per_rank, const CommPlan& plan, const MachineTopology& topo) {
  validate_plan(plan, topo);
  const auto group = kind == CollectiveKind::alltoall ? dim1_geometry(plan) : dim2_geometry(plan);
  return collective_time(kind, bytes_per_rank, group, plan.ranks_per_node(), topo);
}

namespace {

// A plan only issues collectives that have something to move.
double issued_time(CollectiveKind kind, double bytes, const CommPlan& plan, const MachineTopology& topo) {
  return bytes > 0.0 ? collective_time(kind, bytes, plan, topo) : 0.0;
}

}  // namespace

double total_time(const VolumeModel& vm, const CommPlan& plan, const MachineTopology& topo) {
  return issued_time(CollectiveKind::alltoall, alltoall_volume(vm, plan), plan, topo) +
         issued_time(CollectiveKind::allreduce, allreduce_volume(vm, plan), plan, topo);
}

std::vector<CommPlan> enumerate_plans(std::size_t total_ranks, std::size_t nodes, const MachineTopology& topo) {
  topo.validate();
  if (total_ranks == 0 || nodes == 0) throw ParameterError("plan_decomposition: ranks and nodes must be >= 1");
  if (total_ranks % nodes != 0) {
    throw ParameterError("plan_decomposition: " + std::to_string(total_ranks) + " ranks do not divide evenly over " +
                         std::to_string(nodes) + " nodes");
  }
  const std::size_t rpn = total_ranks / nodes;
  if (rpn > topo.rank_capacity()) {
    throw ParameterError("plan_decomposition: " + std::to_string(total_ranks) + " ranks exceed " +
                         std::to_string(nodes) + " nodes x " + std::to_string(topo.rank_capacity()) + " ranks/node");
  }
  std::vector<CommPlan> plans;
  for (std::size_t n1 = 1; n1 <= total_ranks; ++n1) {
    if (total_ranks % n1 != 0) continue;
    const std::size_t n2 = total_ranks / n1;
    if (n1 <= rpn && rpn % n1 == 0) plans.push_back({n1, n2, {PlacementKind::dim1_intra_node, 1}, nodes});
    for (std::size_t k = 2; k <= std::min(n1, nodes); ++k) {
      if (n1 % k != 0 || rpn % (n1 / k) != 0) continue;
      plans.push_back({n1, n2, {PlacementKind::dim1_spread, k}, nodes});
    }
  }
  if (plans.empty()) throw ParameterError("plan_decomposition: no valid factorization");
  return plans;
}

CommPlan plan_decomposition(const VolumeModel& vm, std::size_t total_ranks, std::size_t nodes,
                            const MachineTopology& topo) {
  const auto plans = enumerate_plans(total_ranks, nodes, topo);
  const CommPlan* best = nullptr;
  double best_cost = 0.0;
  for (const auto& plan : plans) {
    const double cost = total_time(vm, plan, topo);
    if (best == nullptr) {
      best = &plan;
      best_cost = cost;
      continue;
    }
    const double tol = 1e-12 * std::max(std::abs(cost), std::abs(best_cost));
    const bool cheaper = cost < best_cost - tol;
    const bool tie = std::abs(cost - best_cost) <= tol;
    const bool tie_wins = tie && (plan.n1 > best->n1 || (plan.n1 == best->n1 && plan.placement.nodes < best->placement.nodes));
    if (cheaper || tie_wins) {
      best = &plan;
      best_cost = cost;
    }
  }
  return *best;
}

double Prediction::total_seconds() const noexcept {
  double total = 0.0;
  for (const auto& row : rows) total += row.seconds;
  return total;
}

Prediction predict_report(const VolumeModel& vm, const MachineTopology& topo, const CommPlan& plan) {
  validate_plan(plan, topo);
  Prediction out;
  const auto g1 = dim1_geometry(plan);
  const auto g2 = dim2_geometry(plan);
  const double v1 = alltoall_volume(vm, plan);
  const double v2 = allreduce_volume(vm, plan);
  out.rows.push_back({1, CollectiveKind::alltoall, g1.size, g1.nodes(), v1,
                      issued_time(CollectiveKind::alltoall, v1, plan, topo)});
  out.rows.push_back({2, CollectiveKind::allreduce, g2.size, g2.nodes(), v2,
                      issued_time(CollectiveKind::allreduce, v2, plan, topo)});
  return out;
}

Prediction predict_report(const GridShape& shape, const MachineTopology& topo, const CommPlan& plan) {
  return predict_report(VolumeModel::from_shape(shape), topo, plan);
}

}  // namespace gyroproxy::commsim
