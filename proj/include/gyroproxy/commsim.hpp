#pragma once

// Analytic cost model for the two-dimensional communication layout: an all-to-all
// (transpose) over groups of n1 ranks and an all-reduce over groups of n2 ranks.
//
// Every collective is priced as latency * messages + bytes / bandwidth. All ranks of a node
// communicate at the same time, so each rank gets a share of the node's resources:
//
//   intra share   = intra_links * intra_link_bw / max(ranks_per_node, gpus_per_node)
//   network share = nics_per_node * nic_bw / max(ranks_per_node, nics_per_node)
//                   (divided by shared_bus_contention for a shared-bus NIC layout)
//
// Pairwise-exchange all-to-all over g ranks with m of them on each node: g - 1 messages of
// B / (g - 1) bytes; the m - 1 on-node ones cost intra latency and bandwidth, the g - m
// off-node ones cost network latency (+ the shared-bus penalty) and network bandwidth.
//
// Pipelined ring all-reduce over g ranks: ceil(B / segment_bytes) rounds of 2 (g - 1)
// messages. A ring that leaves the node runs at min(intra, network) share and pays network
// latency (+ penalty) per message; an on-node ring uses intra figures only.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gyroproxy/grid.hpp"

namespace gyroproxy::commsim {

enum class NicLayout { shared_bus, per_gpu };

std::string_view to_string(NicLayout layout);

struct MachineTopology {
  std::string name;
  std::size_t gpus_per_node = 4;
  std::size_t processes_per_gpu = 1;
  std::size_t intra_links = 4;
  double intra_link_gbps = 25.0;  // GB/s per link
  NicLayout nic_layout = NicLayout::per_gpu;
  std::size_t nics_per_node = 4;
  double nic_gbps = 25.0;  // GB/s per NIC
  double shared_bus_latency_penalty_s = 2e-6;
  double shared_bus_contention = 1.5;
  double intra_latency_s = 1e-6;
  double network_latency_s = 2e-6;
  double segment_bytes = 4.0 * 1024 * 1024;

  /// Aggregate on-node bandwidth in bytes/s.
  double intra_bandwidth() const noexcept { return static_cast<double>(intra_links) * intra_link_gbps * 1e9; }
  /// Aggregate NIC bandwidth per node in bytes/s.
  double nic_bandwidth() const noexcept { return static_cast<double>(nics_per_node) * nic_gbps * 1e9; }
  std::size_t rank_capacity() const noexcept { return gpus_per_node * processes_per_gpu; }

  /// Throws ParameterError on nonpositive bandwidths, zero counts or contention < 1.
  void validate() const;
};

/// perlmutter_like: 4 GPUs, 4 x 25 GB/s intra, four 25 GB/s NICs on a shared bus.
/// frontier_like: 4 GPU chips with 2 ranks each, 2 x 50 GB/s intra, one 25 GB/s NIC per GPU.
MachineTopology builtin_topology(std::string_view name);
std::vector<std::string> builtin_topology_names();

/// Parse `key=value` lines (`#` starts a comment). Keys match the MachineTopology fields;
/// nic_layout takes shared_bus or per_gpu. Fields that are not given keep their defaults.
MachineTopology parse_topology(std::string_view text);
MachineTopology load_topology(const std::filesystem::path& path);
std::string to_key_value(const MachineTopology& topo);

enum class CollectiveKind { alltoall, allreduce };
std::string_view to_string(CollectiveKind kind);

enum class PlacementKind { dim1_intra_node, dim1_spread };

struct Placement {
  PlacementKind kind = PlacementKind::dim1_intra_node;
  std::size_t nodes = 1;  // nodes spanned by one dim-1 group

  friend bool operator==(const Placement&, const Placement&) = default;
};

std::string to_string(const Placement& placement);

struct CommPlan {
  std::size_t n1 = 1;     // all-to-all group size
  std::size_t n2 = 1;     // all-reduce group size
  Placement placement;
  std::size_t nodes = 1;  // nodes in the job

  std::size_t total_ranks() const noexcept { return n1 * n2; }
  std::size_t ranks_per_node() const noexcept { return total_ranks() / nodes; }

  friend bool operator==(const CommPlan&, const CommPlan&) = default;
};

/// A communication group: `size` ranks, `per_node` of them on each node it touches.
struct GroupGeometry {
  std::size_t size = 1;
  std::size_t per_node = 1;

  std::size_t nodes() const noexcept { return (size + per_node - 1) / per_node; }
};

/// Throws ParameterError when the plan cannot be laid out on the topology.
void validate_plan(const CommPlan& plan, const MachineTopology& topo);

GroupGeometry dim1_geometry(const CommPlan& plan);
GroupGeometry dim2_geometry(const CommPlan& plan);

struct VolumeModel {
  double state_bytes = 0.0;
  double field_bytes_base = 0.0;

  /// 16 bytes per complex element: the full state and one field moment.
  static VolumeModel from_shape(const GridShape& shape);
};

/// state_bytes / ranks * (n1 - 1) / n1.
double alltoall_volume(const VolumeModel& vm, const CommPlan& plan);
/// field_bytes_base * n2 / ranks * 2 (n2 - 1) / n2.
double allreduce_volume(const VolumeModel& vm, const CommPlan& plan);

/// Predicted seconds for one collective over an explicit group geometry.
double collective_time(CollectiveKind kind, double bytes_per_rank, const GroupGeometry& group,
                       std::size_t ranks_per_node, const MachineTopology& topo);

/// Predicted seconds for a plan's collective: all-to-all runs over the dim-1 group,
/// all-reduce over the dim-2 group.
double collective_time(CollectiveKind kind, double bytes_per_rank, const CommPlan& plan, const MachineTopology& topo);

/// Sum of both collectives at the plan's volumes. A collective with zero bytes is not issued
/// and costs nothing.
double total_time(const VolumeModel& vm, const CommPlan& plan, const MachineTopology& topo);

/// Every layable (n1, n2, placement) for `total_ranks` ranks spread evenly over `nodes`.
std::vector<CommPlan> enumerate_plans(std::size_t total_ranks, std::size_t nodes, const MachineTopology& topo);

/// Cheapest plan by total_time; ties go to the larger n1, then to fewer spread nodes.
CommPlan plan_decomposition(const VolumeModel& vm, std::size_t total_ranks, std::size_t nodes,
                            const MachineTopology& topo);

struct PredictionRow {
  int dimension = 1;
  CollectiveKind kind = CollectiveKind::alltoall;
  std::size_t group_size = 1;
  std::size_t group_nodes = 1;
  double bytes_per_rank = 0.0;
  double seconds = 0.0;
};

struct Prediction {
  std::vector<PredictionRow> rows;
  double total_seconds() const noexcept;
};

/// One row per dimension; rows sum to total_time.
Prediction predict_report(const GridShape& shape, const MachineTopology& topo, const CommPlan& plan);
Prediction predict_report(const VolumeModel& vm, const MachineTopology& topo, const CommPlan& plan);

}  // namespace gyroproxy::commsim
