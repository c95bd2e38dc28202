// SPDX-License-Identifier: Apache-2.0
#include "crossflow/perf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "nlohmann/json.hpp"

#include "crossflow/errors.hpp"

namespace crossflow {

namespace {

enum class RingAxis { kKp1, kKp2, kDp };

// Member edges of one collective ring family (all replicas of one node's
// ring along one axis). Replicas are not simulated individually: the
// slowest member edge sets the step time.
struct RingBucket {
  int steps = 1;
  std::vector<int> member_edges;  // supergraph edge indices
};

struct TaskBuilder {
  std::vector<Task> tasks;
  std::vector<std::string> resource_names;
  std::map<std::string, int> resource_ids;

  int resource(const std::string& name) {
    auto it = resource_ids.find(name);
    if (it != resource_ids.end()) return it->second;
    int id = static_cast<int>(resource_names.size());
    resource_names.push_back(name);
    resource_ids.emplace(name, id);
    return id;
  }

  int add(double duration, std::vector<int> deps, std::vector<int> resources,
          std::string label) {
    Task t;
    t.duration = duration;
    t.deps = std::move(deps);
    t.resources = std::move(resources);
    t.label = std::move(label);
    tasks.push_back(std::move(t));
    return static_cast<int>(tasks.size()) - 1;
  }
};

std::string link_resource_name(const Link& l) {
  std::ostringstream out;
  out << "link:" << (l.level == 0 ? "intra" : "inter") << ":" << l.from << "->"
      << l.to;
  return out.str();
}

// Batch-bearing dimension: the contraction for grad-weight, m otherwise.
std::int64_t& batch_dim(KernelNode& k) {
  return k.role == KernelRole::kGemmBwdWeight ? k.k : k.m;
}

bool batch_scaled(const KernelNode& k) {
  return k.role != KernelRole::kGemmBwdWeight;
}

}  // namespace

TimingReport simulate(const SuperGraph& sg, const Mapping& mapping,
                      const SystemGraph& sys, const ArchSpec& arch,
                      const PerfOptions& opt) {
  const ComputeGraph& base = sg.base;
  const int prec = base.precision_bytes;
  const int microbatches =
      opt.num_microbatches > 0 ? opt.num_microbatches : sg.strategy.lp;

  TimingReport report;
  report.num_microbatches = microbatches;

  std::vector<double> eff_bw = effective_bandwidths(mapping, sys);
  std::vector<int> routed_of(sg.edges.size(), -1);
  for (int i = 0; i < static_cast<int>(mapping.edge_routes.size()); ++i) {
    routed_of[mapping.edge_routes[i].edge_index] = i;
  }
  auto edge_transfer_time = [&](int sg_edge, std::int64_t bytes) {
    int routed = routed_of[sg_edge];
    if (routed < 0) return 0.0;  // co-located
    const RoutedEdge& re = mapping.edge_routes[routed];
    return edge_time(bytes, eff_bw[routed], route_latency(re.links, sys));
  };
  auto edge_route_resources = [&](int sg_edge, TaskBuilder& tb) {
    std::vector<int> rs;
    int routed = routed_of[sg_edge];
    if (routed < 0) return rs;
    for (const Link& l : mapping.edge_routes[routed].links) {
      rs.push_back(tb.resource(link_resource_name(l)));
    }
    return rs;
  };

  // Collective ring families keyed by (node, role, axis).
  std::map<std::tuple<int, CrossRole, RingAxis>, RingBucket> rings;
  for (int e = 0; e < static_cast<int>(sg.edges.size()); ++e) {
    const SuperEdge& se = sg.edges[e];
    if (!se.cross || se.role == CrossRole::kPipelineActivation) continue;
    const Shard& src = sg.shards[se.src];
    const Shard& dst = sg.shards[se.dst];
    RingAxis axis = RingAxis::kDp;
    if (se.role == CrossRole::kKpReduceStep) {
      axis = src.kp1 != dst.kp1 ? RingAxis::kKp1 : RingAxis::kKp2;
    }
    RingBucket& bucket = rings[{src.node_id, se.role, axis}];
    bucket.steps = se.steps;
    bucket.member_edges.push_back(e);
  }

  // Step time for one ring family; per-microbatch payloads rescale batch-
  // bearing tensors. Returns (step_time, slowest member edge).
  auto ring_step_timing = [&](const RingBucket& bucket, int mb, bool per_microbatch) {
    double worst = 0;
    int worst_edge = -1;
    for (int e : bucket.member_edges) {
      const SuperEdge& se = sg.edges[e];
      const Shard& src = sg.shards[se.src];
      std::int64_t step_bytes = se.bytes / se.steps;
      if (per_microbatch && batch_scaled(src.kernel)) {
        KernelNode k = src.kernel;
        std::int64_t full = batch_dim(k);
        std::int64_t share = split_sizes(full, microbatches)[mb];
        // Payloads are proportional to the batch-bearing dim of the source.
        step_bytes = se.bytes / se.steps * share / full;
        if (step_bytes < 1) step_bytes = 1;
      }
      double t = edge_transfer_time(e, step_bytes);
      if (worst_edge < 0 || t > worst) {
        worst = t;
        worst_edge = e;
      }
    }
    return std::make_pair(worst, worst_edge);
  };

  TaskBuilder tb;
  std::vector<int> stage_device(sg.num_stages());
  for (int s = 0; s < sg.num_stages(); ++s) {
    stage_device[s] = tb.resource("dev:stage" + std::to_string(s));
  }

  // Distinct shard shapes per node; the representative duration is the max.
  const int num_nodes = static_cast<int>(base.nodes.size());
  std::vector<std::vector<KernelNode>> distinct_shards(num_nodes);
  for (const Shard& sh : sg.shards) {
    auto& list = distinct_shards[sh.node_id];
    bool seen = false;
    for (const KernelNode& k : list) {
      if (k.m == sh.kernel.m && k.n == sh.kernel.n && k.k == sh.kernel.k &&
          k.elementwise_flops == sh.kernel.elementwise_flops) {
        seen = true;
        break;
      }
    }
    if (!seen) list.push_back(sh.kernel);
  }

  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>,
           RooflineProfile>
      timing_cache;
  auto time_kernel = [&](const KernelNode& k) -> const RooflineProfile& {
    auto key = std::make_tuple(k.m, k.n, k.k, k.elementwise_flops);
    auto it = timing_cache.find(key);
    if (it == timing_cache.end()) {
      TilingSearchResult tiles =
          search_tilings(k, arch, opt.tiling_samples, opt.seed, prec);
      it = timing_cache.emplace(key, kernel_time(k, arch, tiles, prec)).first;
    }
    return it->second;
  };

  struct NodeProfile {
    const RooflineProfile* profile;
    KernelNode kernel;
  };
  auto node_microbatch_profile = [&](int node, int mb) {
    NodeProfile best{nullptr, {}};
    for (const KernelNode& shard : distinct_shards[node]) {
      KernelNode k = shard;
      std::int64_t per_elem =
          k.elementwise_flops > 0 ? k.elementwise_flops / (k.m * k.n) : 0;
      std::int64_t full = batch_dim(k);
      batch_dim(k) = split_sizes(full, microbatches)[mb];
      k.elementwise_flops = per_elem * k.m * k.n;
      const RooflineProfile& prof = time_kernel(k);
      if (best.profile == nullptr || prof.time > best.profile->time) {
        best = {&prof, k};
      }
    }
    return best;
  };

  // Base-graph adjacency and topological order.
  std::vector<std::vector<int>> in_edges(num_nodes);
  for (int e = 0; e < static_cast<int>(base.edges.size()); ++e) {
    in_edges[base.edges[e].dst].push_back(e);
  }
  std::vector<int> topo;
  {
    std::vector<int> indeg(num_nodes, 0);
    std::vector<std::vector<int>> out(num_nodes);
    for (const auto& e : base.edges) {
      ++indeg[e.dst];
      out[e.src].push_back(e.dst);
    }
    std::vector<int> stack;
    for (int i = num_nodes - 1; i >= 0; --i) {
      if (indeg[i] == 0) stack.push_back(i);
    }
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      topo.push_back(u);
      for (int v : out[u]) {
        if (--indeg[v] == 0) stack.push_back(v);
      }
    }
    if (static_cast<int>(topo.size()) != num_nodes) {
      throw SimulationError("simulate", "base graph has a cycle");
    }
  }

  // Cross activation edges grouped per base edge.
  std::vector<std::vector<int>> base_edge_cross(base.edges.size());
  for (int e = 0; e < static_cast<int>(sg.edges.size()); ++e) {
    const SuperEdge& se = sg.edges[e];
    if (se.cross && se.base_edge >= 0) base_edge_cross[se.base_edge].push_back(e);
  }

  // out_ready[node][mb]: tasks gating consumers of the node's output.
  std::vector<std::vector<std::vector<int>>> out_ready(
      num_nodes, std::vector<std::vector<int>>(microbatches));
  std::vector<int> all_kernel_tasks;

  for (int mb = 0; mb < microbatches; ++mb) {
    for (int u : topo) {
      const KernelNode& node = base.nodes[u];
      int stage = sg.stage_of_layer[node.layer];

      std::vector<int> deps;
      for (int e : in_edges[u]) {
        const GraphEdge& be = base.edges[e];
        const auto& src_ready = out_ready[be.src][mb];
        if (base_edge_cross[e].empty()) {
          deps.insert(deps.end(), src_ready.begin(), src_ready.end());
          continue;
        }
        // Cross-stage activation transfer: slowest replica governs.
        double worst = 0;
        int worst_edge = -1;
        for (int se_idx : base_edge_cross[e]) {
          const SuperEdge& se = sg.edges[se_idx];
          const Shard& src_shard = sg.shards[se.src];
          std::int64_t mmb = split_sizes(src_shard.kernel.m, microbatches)[mb];
          std::int64_t bytes = mmb * src_shard.kernel.n * prec;
          double t = edge_transfer_time(se_idx, bytes);
          if (worst_edge < 0 || t > worst) {
            worst = t;
            worst_edge = se_idx;
          }
        }
        std::ostringstream label;
        label << "xfer:e" << e << ":mb" << mb;
        int task = tb.add(worst, src_ready, edge_route_resources(worst_edge, tb),
                          label.str());
        deps.push_back(task);

        EdgeTaskReport er;
        er.base_edge = e;
        er.role = "pipeline_activation";
        er.microbatch = mb;
        er.steps = 1;
        er.step_time = worst;
        er.total_time = worst;
        report.per_edge.push_back(er);
      }

      NodeProfile np = node_microbatch_profile(u, mb);
      std::ostringstream label;
      label << "kernel:n" << u << ":mb" << mb;
      int ktask =
          tb.add(np.profile->time, deps, {stage_device[stage]}, label.str());
      all_kernel_tasks.push_back(ktask);

      KernelTaskReport kr;
      kr.node = u;
      kr.microbatch = mb;
      kr.role = to_string(node.role);
      kr.time = np.profile->time;
      kr.bound = np.profile->bound;
      kr.m = np.kernel.m;
      kr.n = np.kernel.n;
      kr.k = np.kernel.k;
      report.per_kernel.push_back(kr);
      report.bound_histogram[np.profile->bound] += np.profile->time;

      // Kernel-parallel collectives gate consumers microbatch by microbatch;
      // grad-weight reductions run once per iteration instead (below).
      std::vector<int> ready = {ktask};
      if (node.role != KernelRole::kGemmBwdWeight) {
        for (RingAxis axis : {RingAxis::kKp1, RingAxis::kKp2}) {
          auto it = rings.find({u, CrossRole::kKpReduceStep, axis});
          if (it == rings.end()) continue;
          const RingBucket& bucket = it->second;
          auto [step_time, slow_edge] = ring_step_timing(bucket, mb, true);
          int prev = ktask;
          for (int s = 0; s < bucket.steps; ++s) {
            std::ostringstream slabel;
            slabel << "kp:n" << u << (axis == RingAxis::kKp1 ? ":r" : ":c")
                   << ":mb" << mb << ":s" << s;
            prev = tb.add(step_time, {prev},
                          edge_route_resources(slow_edge, tb), slabel.str());
          }
          ready.push_back(prev);

          EdgeTaskReport er;
          er.node = u;
          er.role = "kp_reduce_step";
          er.microbatch = mb;
          er.steps = bucket.steps;
          er.step_time = step_time;
          er.total_time = step_time * bucket.steps;
          report.per_edge.push_back(er);
        }
      }
      out_ready[u][mb] = ready;
    }
  }

  // Once-per-iteration gradient collectives: the CR partial-sum reduction of
  // a grad-weight tensor (accumulated locally across microbatches), then the
  // data-parallel ring all-reduce.
  for (int u : topo) {
    const KernelNode& node = base.nodes[u];
    bool is_weight_grad = node.role == KernelRole::kGemmBwdWeight;

    std::vector<int> grad_deps;
    if (is_weight_grad) {
      for (int mb = 0; mb < microbatches; ++mb) {
        grad_deps.insert(grad_deps.end(), out_ready[u][mb].begin(),
                         out_ready[u][mb].end());
      }
      if (!opt.overlap_collectives) {
        grad_deps = all_kernel_tasks;
      }
    }

    auto chain_ring = [&](CrossRole role, RingAxis axis, const char* tag) {
      auto it = rings.find({u, role, axis});
      if (it == rings.end()) return;
      if (!is_weight_grad && role == CrossRole::kKpReduceStep) return;
      const RingBucket& bucket = it->second;
      auto [step_time, slow_edge] = ring_step_timing(bucket, 0, false);
      int prev = -1;
      for (int s = 0; s < bucket.steps; ++s) {
        std::ostringstream label;
        label << tag << ":n" << u << ":s" << s;
        std::vector<int> deps = prev < 0 ? grad_deps : std::vector<int>{prev};
        prev = tb.add(step_time, deps, edge_route_resources(slow_edge, tb),
                      label.str());
      }
      grad_deps = {prev};

      EdgeTaskReport er;
      er.node = u;
      er.role = role == CrossRole::kKpReduceStep ? "kp_reduce_step"
                                                 : "ring_allreduce_step";
      er.steps = bucket.steps;
      er.step_time = step_time;
      er.total_time = step_time * bucket.steps;
      report.per_edge.push_back(er);
    };

    if (is_weight_grad) {
      chain_ring(CrossRole::kKpReduceStep, RingAxis::kKp1, "kpgrad");
      chain_ring(CrossRole::kKpReduceStep, RingAxis::kKp2, "kpgrad2");
      chain_ring(CrossRole::kRingAllreduceStep, RingAxis::kDp, "allreduce");
    }
  }

  report.schedule =
      list_schedule(tb.tasks, static_cast<int>(tb.resource_names.size()));
  report.end_to_end = report.schedule.makespan;
  report.resource_names = tb.resource_names;
  report.task_labels.reserve(tb.tasks.size());
  for (const auto& t : tb.tasks) report.task_labels.push_back(t.label);
  return report;
}

std::string timing_report_to_json(const TimingReport& report) {
  nlohmann::json j;
  j["end_to_end_s"] = report.end_to_end;
  j["num_microbatches"] = report.num_microbatches;

  nlohmann::json kernels = nlohmann::json::array();
  for (const auto& k : report.per_kernel) {
    kernels.push_back({{"node", k.node},
                       {"microbatch", k.microbatch},
                       {"role", k.role},
                       {"time_s", k.time},
                       {"bound", k.bound},
                       {"m", k.m},
                       {"n", k.n},
                       {"k", k.k}});
  }
  j["per_kernel"] = kernels;

  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : report.per_edge) {
    edges.push_back({{"node", e.node},
                     {"base_edge", e.base_edge},
                     {"role", e.role},
                     {"microbatch", e.microbatch},
                     {"steps", e.steps},
                     {"step_time_s", e.step_time},
                     {"total_time_s", e.total_time}});
  }
  j["per_edge"] = edges;

  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [label, time] : report.bound_histogram) hist[label] = time;
  j["bound_histogram"] = hist;

  nlohmann::json trace = nlohmann::json::array();
  for (const auto& st : report.schedule.trace) {
    trace.push_back({{"task", report.task_labels[st.task]},
                     {"start_s", st.start},
                     {"end_s", st.end}});
  }
  j["schedule_trace"] = trace;
  return j.dump(2);
}

std::string schedule_trace_to_csv(const TimingReport& report) {
  std::ostringstream out;
  out << "task,start_s,end_s\n";
  for (const auto& st : report.schedule.trace) {
    out << report.task_labels[st.task] << "," << st.start << "," << st.end << "\n";
  }
  return out.str();
}

}  // namespace crossflow
