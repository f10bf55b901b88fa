#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "routeq/errors.hpp"

namespace routeq {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// TSPLIB EUC_2D metric: Euclidean distance rounded half-up to the nearest integer.
int32_t euc2d(const Point& a, const Point& b);

// A capacitated VRP instance. Node 0 is the depot, customers are 1..n.
// Immutable after construction and safe to share across threads.
class Instance {
public:
    // Validates and builds the distance matrix. Throws StructuralError if the
    // total demand exceeds fleet capacity or n < K.
    Instance(std::string name, Point depot, std::vector<Point> customers,
             std::vector<int> demands, int vehicle_count, long long capacity);

    const std::string& name() const { return name_; }
    int num_customers() const { return n_; }
    int vehicles() const { return k_; }
    long long capacity() const { return q_; }
    long long total_demand() const { return total_demand_; }

    // Node coordinates; node 0 is the depot.
    const Point& position(int node) const { return pos_[node]; }
    // Demand of a customer (1..n).
    int demand(int customer) const { return demands_[customer]; }

    int32_t dist(int i, int j) const { return dist_[static_cast<size_t>(i) * (n_ + 1) + j]; }

private:
    std::string name_;
    int n_ = 0;
    int k_ = 0;
    long long q_ = 0;
    long long total_demand_ = 0;
    std::vector<Point> pos_;      // size n+1, [0] = depot
    std::vector<int> demands_;    // size n+1, [0] = 0
    std::vector<int32_t> dist_;   // (n+1)^2 row-major
};

// Parses a CVRPLIB/TSPLIB ".vrp" stream (EUC_2D only). When the file carries
// no VEHICLES field, the fleet size is taken from a "-kN" suffix in the name.
// name_hint supplies the name when the NAME field is absent (e.g. a filename).
Instance parse_cvrplib(std::istream& in, const std::string& name_hint = "");
Instance load_cvrplib(const std::string& path);

// Writes the instance back in CVRPLIB format (round-trip stable).
void write_cvrplib(const Instance& inst, std::ostream& out);
void save_cvrplib(const Instance& inst, const std::string& path);

// Chunks the base instance's nodes (its own depot discarded) into consecutive
// blocks of block_size; within each block the first node becomes the depot and
// the rest become customers. Capacity is ceil(sum(q)/(K-1)) - 1 so that all K
// vehicles are required. Blocks whose largest demand exceeds that capacity are
// skipped with a warning on the provided stream. The trailing partial block is
// discarded. Derived instances are named "<base>-blk<i>".
std::vector<Instance> derive_small_instances(const Instance& base, int block_size = 21,
                                             int vehicles = 5, std::ostream* warnings = nullptr);

}  // namespace routeq
