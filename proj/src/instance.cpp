#include "routeq/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace routeq {

int32_t euc2d(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return static_cast<int32_t>(std::floor(std::sqrt(dx * dx + dy * dy) + 0.5));
}

Instance::Instance(std::string name, Point depot, std::vector<Point> customers,
                   std::vector<int> demands, int vehicle_count, long long capacity)
    : name_(std::move(name)), n_(static_cast<int>(customers.size())), k_(vehicle_count), q_(capacity) {
    if (demands.size() != customers.size())
        throw StructuralError("demand count does not match customer count");
    if (k_ <= 0) throw StructuralError("vehicle count must be positive");
    if (q_ <= 0) throw StructuralError("capacity must be positive");
    if (n_ < k_)
        throw StructuralError("instance has fewer customers (" + std::to_string(n_) +
                              ") than vehicles (" + std::to_string(k_) + ")");
    pos_.reserve(n_ + 1);
    pos_.push_back(depot);
    pos_.insert(pos_.end(), customers.begin(), customers.end());
    demands_.assign(1, 0);
    for (int q : demands) {
        if (q < 0) throw StructuralError("negative demand");
        demands_.push_back(q);
        total_demand_ += q;
    }
    if (total_demand_ > static_cast<long long>(k_) * q_)
        throw StructuralError("infeasible instance: total demand " + std::to_string(total_demand_) +
                              " exceeds fleet capacity " + std::to_string(static_cast<long long>(k_) * q_));
    dist_.resize(static_cast<size_t>(n_ + 1) * (n_ + 1));
    for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j)
            dist_[static_cast<size_t>(i) * (n_ + 1) + j] = euc2d(pos_[i], pos_[j]);
}

namespace {

// Fleet size from a CVRPLIB-style "-kN" name suffix, or 0 when absent.
int vehicles_from_name(const std::string& name) {
    auto pos = name.rfind("-k");
    if (pos == std::string::npos) return 0;
    int v = 0;
    size_t i = pos + 2;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) {
        v = v * 10 + (name[i] - '0');
        ++i;
    }
    // reject suffixes like "-k5x" but allow a trailing extension
    if (i < name.size() && name[i] != '.') return 0;
    return v;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_extension(const std::string& s) {
    auto slash = s.find_last_of("/\\");
    std::string base = slash == std::string::npos ? s : s.substr(slash + 1);
    auto dot = base.rfind('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

void format_coord(std::ostream& out, double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        out << static_cast<long long>(v);
    } else {
        out << std::setprecision(17) << v;
    }
}

}  // namespace

Instance parse_cvrplib(std::istream& in, const std::string& name_hint) {
    std::string name = strip_extension(name_hint);
    long long capacity = 0;
    int vehicles = 0;
    int dimension = -1;
    bool saw_euc2d = false;
    std::map<int, Point> coords;
    std::map<int, int> demands;
    std::vector<int> depots;

    std::string line;
    long lineno = 0;
    enum class Section { None, Coords, Demands, Depots } section = Section::None;

    auto parse_kv = [&](const std::string& key, const std::string& value) {
        if (key == "NAME") {
            if (!value.empty()) name = value;
        } else if (key == "CAPACITY") {
            capacity = std::stoll(value);
        } else if (key == "VEHICLES") {
            vehicles = std::stoi(value);
        } else if (key == "DIMENSION") {
            dimension = std::stoi(value);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D")
                throw UnsupportedFormatError("unsupported edge weight type: " + value);
            saw_euc2d = true;
        }
        // TYPE, COMMENT and other keywords are accepted and ignored.
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;
        if (t == "NODE_COORD_SECTION") { section = Section::Coords; continue; }
        if (t == "DEMAND_SECTION") { section = Section::Demands; continue; }
        if (t == "DEPOT_SECTION") { section = Section::Depots; continue; }
        if (t.find(':') != std::string::npos && section == Section::None) {
            auto colon = t.find(':');
            std::string key = trim(t.substr(0, colon));
            std::string value = trim(t.substr(colon + 1));
            try {
                parse_kv(key, value);
            } catch (const UnsupportedFormatError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError("cannot parse value for " + key, lineno);
            }
            continue;
        }
        std::istringstream ls(t);
        switch (section) {
            case Section::Coords: {
                int id;
                double x, y;
                if (!(ls >> id >> x >> y)) throw ParseError("malformed coordinate row", lineno);
                coords[id] = Point{x, y};
                break;
            }
            case Section::Demands: {
                int id, q;
                if (!(ls >> id >> q)) throw ParseError("malformed demand row", lineno);
                demands[id] = q;
                break;
            }
            case Section::Depots: {
                int id;
                if (!(ls >> id)) throw ParseError("malformed depot row", lineno);
                if (id >= 0) depots.push_back(id);
                break;
            }
            case Section::None:
                throw ParseError("unexpected data outside any section: " + t, lineno);
        }
    }

    if (!saw_euc2d)
        throw UnsupportedFormatError("missing EDGE_WEIGHT_TYPE (only EUC_2D is supported)");
    if (coords.empty()) throw StructuralError("no coordinates given");
    if (dimension >= 0 && static_cast<size_t>(dimension) != coords.size())
        throw StructuralError("DIMENSION disagrees with coordinate count");
    if (depots.empty()) throw StructuralError("missing depot");
    if (depots.size() > 1) throw StructuralError("multiple depots are not supported");
    if (capacity <= 0) throw StructuralError("missing or non-positive CAPACITY");

    const int depot_id = depots.front();
    if (!coords.count(depot_id)) throw StructuralError("depot node has no coordinates");

    if (vehicles == 0) vehicles = vehicles_from_name(name);
    if (vehicles == 0)
        throw StructuralError("vehicle count not given and not derivable from the name");

    Point depot = coords[depot_id];
    std::vector<Point> customers;
    std::vector<int> cdem;
    for (const auto& [id, p] : coords) {
        if (id == depot_id) continue;
        auto it = demands.find(id);
        if (it == demands.end())
            throw StructuralError("customer " + std::to_string(id) + " has no demand");
        customers.push_back(p);
        cdem.push_back(it->second);
    }
    if (demands.count(depot_id) && demands[depot_id] != 0)
        throw StructuralError("depot demand must be zero");

    return Instance(name, depot, std::move(customers), std::move(cdem), vehicles, capacity);
}

Instance load_cvrplib(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_cvrplib(in, path);
}

void write_cvrplib(const Instance& inst, std::ostream& out) {
    const int n = inst.num_customers();
    out << "NAME : " << inst.name() << "\n";
    out << "TYPE : CVRP\n";
    out << "DIMENSION : " << n + 1 << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "CAPACITY : " << inst.capacity() << "\n";
    out << "VEHICLES : " << inst.vehicles() << "\n";
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i <= n; ++i) {
        out << i + 1 << " ";
        format_coord(out, inst.position(i).x);
        out << " ";
        format_coord(out, inst.position(i).y);
        out << "\n";
    }
    out << "DEMAND_SECTION\n";
    out << "1 0\n";
    for (int i = 1; i <= n; ++i) out << i + 1 << " " << inst.demand(i) << "\n";
    out << "DEPOT_SECTION\n1\n-1\nEOF\n";
}

void save_cvrplib(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    write_cvrplib(inst, out);
}

std::vector<Instance> derive_small_instances(const Instance& base, int block_size, int vehicles,
                                             std::ostream* warnings) {
    if (block_size < vehicles + 1)
        throw UsageError("block size must exceed the vehicle count");
    const int usable = base.num_customers();  // the base depot is discarded
    if (usable < block_size)
        throw UsageError("base instance has fewer usable nodes than one block");

    std::vector<Instance> out;
    const int blocks = usable / block_size;
    for (int b = 0; b < blocks; ++b) {
        const int first = 1 + b * block_size;  // base customer index of the block head
        Point depot = base.position(first);
        std::vector<Point> customers;
        std::vector<int> demands;
        long long sum = 0;
        int maxq = 0;
        for (int i = 1; i < block_size; ++i) {
            customers.push_back(base.position(first + i));
            int q = base.demand(first + i);
            demands.push_back(q);
            sum += q;
            maxq = std::max(maxq, q);
        }
        const long long cap = (sum + vehicles - 2) / (vehicles - 1) - 1;  // ceil(sum/(K-1)) - 1
        std::string name = base.name() + "-blk" + std::to_string(b + 1);
        if (maxq > cap || sum > static_cast<long long>(vehicles) * cap) {
            if (warnings)
                *warnings << "warning: skipping " << name << ": block infeasible under capacity "
                          << cap << "\n";
            continue;
        }
        out.emplace_back(std::move(name), depot, std::move(customers), std::move(demands),
                         vehicles, cap);
    }
    return out;
}

}  // namespace routeq
