// Copyright 2026 The wbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wbqc/protocol2d.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "wbqc/errors.hpp"

namespace wbqc {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double a) { return std::remainder(a, 2 * kPi); }

std::size_t find_site(const ZigzagLayout &l, Site s) {
    for (std::size_t i = 0; i < l.sites.size(); ++i)
        if (l.sites[i] == s) return i;
    throw InvalidLayout("no site at (" + std::to_string(s.x) + ", " + std::to_string(s.y) + ")");
}

bool has_site(const std::set<Site> &s, int x, int y) { return s.count({x, y}) > 0; }

}  // namespace

std::vector<Point> ZigzagLayout::points() const {
    std::vector<Point> p;
    for (const auto &s : sites) p.push_back({double(s.x), double(s.y)});
    return p;
}

std::string ZigzagLayout::to_grid() const {
    std::set<Site> kept(sites.begin(), sites.end());
    std::string out;
    for (int y = 0; y <= m_sep; ++y) {
        std::string row(std::size_t(width), '.');
        for (int x = 0; x < width; ++x)
            if (kept.count({x, y})) row[std::size_t(x)] = '#';
        out += row;
        out += '\n';
    }
    return out;
}

std::string default_link_shape(int m_sep) {
    if (m_sep < 2) throw InvalidLayout("chains must be at least two rows apart");
    // link sites = moves - 1 = m_sep + rights - 1, which must be even
    int rights = std::max(0, m_sep - 3);
    if ((m_sep + rights) % 2 == 0) --rights;
    if (rights < 0) rights = 0;
    std::string shape = "DD";
    int row = 2;
    for (int k = 0; k < rights; ++k, ++row) shape += "RD";
    while (row < m_sep) {
        shape += 'D';
        ++row;
    }
    return shape;
}

ZigzagLayout build_zigzag(int m_sep, std::string link_shape, int junction, int width) {
    if (m_sep < 2) throw InvalidLayout("chains must be at least two rows apart, got " + std::to_string(m_sep));
    if (junction < 1) throw InvalidLayout("the junction needs an upper chain site to its left");
    if (link_shape.empty()) link_shape = default_link_shape(m_sep);
    if (link_shape.size() < 2 || link_shape[0] != 'D' || link_shape[1] != 'D')
        throw InvalidLayout("link must start with two downward moves");

    ZigzagLayout l;
    l.m_sep = m_sep;
    l.link_shape = link_shape;
    l.junction = junction;

    std::vector<Site> path;
    int x = junction, y = 0;
    for (std::size_t k = 0; k < link_shape.size(); ++k) {
        const char c = link_shape[k];
        if (c == 'D') {
            ++y;
        } else if (c == 'R') {
            if (y < 2 || y > m_sep - 2)
                throw InvalidLayout("rightward link move on row " + std::to_string(y) + " touches a chain");
            ++x;
        } else {
            throw InvalidLayout(std::string("unknown link move '") + c + "'");
        }
        if (y > m_sep) throw InvalidLayout("link overshoots the lower chain");
        if (y == m_sep && k + 1 != link_shape.size()) throw InvalidLayout("link continues past the lower chain");
        path.push_back({x, y});
    }
    if (y != m_sep) throw InvalidLayout("link does not reach the lower chain");
    path.pop_back();
    l.landing = x;
    l.width = width > 0 ? width : std::max(junction, l.landing) + 2;
    if (l.width <= std::max(junction, l.landing) + 1) throw InvalidLayout("outputs must lie right of the link");

    for (int c = junction % 2; c < l.width; ++c) {
        l.upper_chain.push_back(l.sites.size());
        l.sites.push_back({c, 0});
    }
    for (int c = l.landing % 2; c < l.width; ++c) {
        l.lower_chain.push_back(l.sites.size());
        l.sites.push_back({c, m_sep});
    }
    for (const auto &s : path) {
        l.link.push_back(l.sites.size());
        l.sites.push_back(s);
    }
    l.upper_input = l.upper_chain.front();
    l.upper_output = l.upper_chain.back();
    l.lower_input = l.lower_chain.front();
    l.lower_output = l.lower_chain.back();

    const LatticeGeometry geo(l.sites);  // rejects duplicates
    l.edges = geo.edges();

    const std::set<Site> kept(l.sites.begin(), l.sites.end());
    for (const auto &s : kept)
        if (has_site(kept, s.x + 1, s.y) && has_site(kept, s.x, s.y + 1) && has_site(kept, s.x + 1, s.y + 1))
            throw InvalidLayout("layout contains a closed square at (" + std::to_string(s.x) + ", " +
                                std::to_string(s.y) + ")");
    const Site jn{junction, 0}, ld{l.landing, m_sep};
    for (std::size_t i : l.link)
        for (std::size_t j : geo.neighbors(i)) {
            const Site &n = l.sites[j];
            if ((n.y == 0 && n != jn) || (n.y == m_sep && n != ld))
                throw InvalidLayout("link touches a chain away from its ends");
        }

    for (int c = 0; c < l.width; ++c) {
        std::vector<std::size_t> up, low;
        for (std::size_t i = 0; i < l.sites.size(); ++i) {
            if (l.sites[i].x != c || l.is_output(i)) continue;
            (l.upper_half(i) ? up : low).push_back(i);
        }
        for (auto *g : {&up, &low}) {
            if (g->empty()) continue;
            if (g->size() > 3)
                throw InvalidLayout("column " + std::to_string(c) + " holds more than three sites per half");
            std::sort(g->begin(), g->end(), [&](std::size_t a, std::size_t b) { return l.sites[a].y < l.sites[b].y; });
            l.schedule.push_back(*g);
        }
    }
    return l;
}

ZigzagLayout parse_zigzag(std::string_view grid) {
    const auto [geo, spec] = parse_grid(grid);
    std::vector<Site> kept;
    for (std::size_t i = 0; i < geo.size(); ++i)
        if (spec.keep[i]) kept.push_back(geo.site(i));
    if (kept.empty()) throw InvalidLayout("grid keeps no sites");
    int y0 = kept.front().y, y1 = y0, width = 0;
    for (const auto &s : kept) {
        y0 = std::min(y0, s.y);
        y1 = std::max(y1, s.y);
        width = std::max(width, s.x + 1);
    }
    std::set<Site> set;
    for (const auto &s : kept) set.insert({s.x, s.y - y0});
    const int m_sep = y1 - y0;

    int junction = -1;
    for (const auto &s : set)
        if (s.y == 1) {
            if (junction >= 0) throw InvalidLayout("more than one link leaves the upper chain");
            junction = s.x;
        }
    if (junction < 0 || !set.count({junction, 0})) throw InvalidLayout("no link leaves the upper chain");

    std::string shape;
    Site cur{junction, 0};
    std::set<Site> visited{cur};
    while (cur.y < m_sep) {
        const Site down{cur.x, cur.y + 1}, right{cur.x + 1, cur.y};
        if (set.count(down) && !visited.count(down)) {
            shape += 'D';
            cur = down;
        } else if (cur.y > 0 && set.count(right) && !visited.count(right)) {
            shape += 'R';
            cur = right;
        } else {
            throw InvalidLayout("link is not a down/right path");
        }
        visited.insert(cur);
    }
    ZigzagLayout l = build_zigzag(m_sep, shape, junction, width);
    if (std::set<Site>(l.sites.begin(), l.sites.end()) != set)
        throw InvalidLayout("grid differs from the zig-zag layout with link " + shape + ":\n" + l.to_grid());
    return l;
}

namespace {

Gate pauli_power(int x, int z) {
    Gate g = Gate::Identity();
    if (x) g = gates::pauli_x() * g;
    if (z) g = gates::pauli_z() * g;
    return g;  // Z^z X^x
}

Matrix4cd cz_matrix() {
    Matrix4cd m = Matrix4cd::Identity();
    m(3, 3) = -1.0;
    return m;
}

/// Input/output map of the ideal pattern for forced outcomes (all sites pi-rotated).
Matrix4cd pattern_map(const ZigzagLayout &l, const std::vector<int> &outcomes) {
    auto pos = l.points();
    auto edges = l.edges;
    const std::size_t r1 = pos.size(), r2 = r1 + 1;
    pos.push_back({-10.0, -10.0});
    pos.push_back({-20.0, -20.0});
    edges.emplace_back(r1, l.upper_input);
    edges.emplace_back(r2, l.lower_input);
    GraphWorld w(pos, edges);
    const Gate prep = make_rotation(Axis::X, kPi) * make_rotation(Axis::Y, kPi / 2);
    for (std::size_t i = 0; i < l.size(); ++i)
        if (!l.is_output(i)) w.apply_local(i, prep);
    w.apply_local(r1, gates::hadamard());
    w.apply_local(r2, gates::hadamard());
    for (const auto &group : l.schedule)
        for (std::size_t i : group) {
            const int o = outcomes[i];
            if (w.project(i, o == 0 ? 0.0 : 1.0) != o) throw InternalError("forced projection failed");
        }
    const std::vector<std::size_t> order{r1, r2, l.upper_output, l.lower_output};
    const auto sv = w.readout(order);
    Matrix4cd m;
    for (int o = 0; o < 4; ++o)
        for (int in = 0; in < 4; ++in) m(o, in) = sv.amplitude(std::uint64_t(in) << 2 | std::uint64_t(o));
    return m;
}

/// Scales m so that m^dagger m = 1 when m is proportional to a unitary.
Matrix4cd normalize_unitary(const Matrix4cd &m) {
    const double s = std::sqrt((m.adjoint() * m).trace().real() / 4.0);
    return m / s;
}

}  // namespace

LinkCompilation compile_link(const ZigzagLayout &l) {
    std::vector<int> zeros(l.size(), 0);
    LinkCompilation out;
    out.reference = normalize_unitary(pattern_map(l, zeros));
    const double dev = (out.reference.adjoint() * out.reference - Matrix4cd::Identity()).norm();
    if (dev > 1e-9)
        throw InvalidLayout("link pattern does not act unitarily on the chains (link length " +
                            std::to_string(l.link.size()) + ")");

    const Matrix4cd k = out.reference * cz_matrix();
    // operator-Schmidt decomposition across qubit 1 | qubit 2
    Eigen::Matrix4cd reshuffled;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int j1 = 0; j1 < 2; ++j1)
            for (int i2 = 0; i2 < 2; ++i2)
                for (int j2 = 0; j2 < 2; ++j2) reshuffled(i1 * 2 + j1, i2 * 2 + j2) = k(i1 * 2 + i2, j1 * 2 + j2);
    const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(reshuffled);
    const auto sv = svd.singularValues();
    out.local_residual = sv(1) / sv(0);
    if (out.local_residual > 1e-9) throw InvalidLayout("link realizes an entangling gate other than CZ");
    out.local_clifford = k;

    const Matrix4cd inv = out.reference.adjoint();
    out.byproduct.assign(l.size(), {0, 0, 0, 0});
    for (std::size_t j = 0; j < l.size(); ++j) {
        if (l.is_output(j)) continue;
        std::vector<int> o = zeros;
        o[j] = 1;
        const Matrix4cd p = normalize_unitary(pattern_map(l, o) * inv);
        bool found = false;
        for (int code = 0; code < 16 && !found; ++code) {
            const std::array<int, 4> b{code >> 3 & 1, code >> 2 & 1, code >> 1 & 1, code & 1};
            const Matrix4cd q = kron(pauli_power(b[0], b[1]), pauli_power(b[2], b[3]));
            if (std::abs((q.adjoint() * p).trace()) / 4.0 > 1 - 1e-9) {
                out.byproduct[j] = b;
                found = true;
            }
        }
        if (!found) throw InvalidLayout("outcome of site " + std::to_string(j) + " does not map to a Pauli");
    }
    return out;
}

Disambiguator::Disambiguator(std::size_t sites, FluorescenceObservation first) : n_(sites) {
    if (sites == 0 || sites > 3) throw InvalidArgument("a measurement group holds one to three sites");
    if (first.bright_count < 0 || first.bright_count > int(sites))
        throw InvalidArgument("bright count exceeds the group size");
    // descending, so a lone zero on the first site is tried first
    for (unsigned a = (1u << n_); a-- > 0;)
        if (consistent(a, 0, first)) candidates_.push_back(a);
    if (first.dark()) resolved_ = candidates_.front();
}

bool Disambiguator::consistent(unsigned original, unsigned flips, const FluorescenceObservation &obs) const {
    const unsigned mask = (1u << n_) - 1;
    const int zeros = std::popcount(~(original ^ flips) & mask);
    if (obs.ambiguous) return (zeros > 0) == (obs.bright_count > 0);
    return zeros == obs.bright_count;
}

unsigned Disambiguator::next_flips() const {
    if (done()) throw InternalError("outcomes already resolved");
    const unsigned mask = (1u << n_) - 1;
    // bring the first candidate to all-ones; a dark reading confirms it
    const unsigned want = ~candidates_.front() & mask;
    return want ^ flips_;
}

void Disambiguator::observe(unsigned flips_applied, FluorescenceObservation obs) {
    if (done()) throw InternalError("outcomes already resolved");
    flips_ ^= flips_applied;
    ++attempts_;
    std::erase_if(candidates_, [&](unsigned a) { return !consistent(a, flips_, obs); });
    if (candidates_.empty()) throw InternalError("fluorescence history matches no outcome assignment");
    if (obs.dark()) {
        if (candidates_.size() != 1) throw InternalError("dark reading left several candidates");
        resolved_ = candidates_.front();
    }
}

void Protocol2DConfig::validate() const {
    if (!(r > 0) || !std::isfinite(r)) throw InvalidArgument("r must be positive");
    if (offset_n < 1) throw InvalidArgument("beam offset must be at least one spacing");
    if (!(p_t > 0 && p_t < 1)) throw InvalidArgument("p_t must lie in (0, 1)");
    if (!(p_f >= 0 && p_f <= 1)) throw InvalidArgument("p_f must lie in [0, 1]");
}

World2D::World2D(const ZigzagLayout &layout, const Eigen::Vector2cd &upper, const Eigen::Vector2cd &lower,
                 const Protocol2DConfig &config)
    : layout_(layout),
      config_(config),
      world_(layout.points(), layout.edges, {{layout.upper_input, upper}, {layout.lower_input, lower}}),
      measured_(layout.size(), false) {
    config_.validate();
    world_.apply_all(make_rotation(Axis::Y, kPi / 2));
}

void World2D::apply(std::span<const Pulse> pulses) {
    for (const auto &p : pulses) world_.apply_pulse(p.center, p.peak_angle, config_.r);
}

GroupResult World2D::column_measure(std::span<const std::size_t> group, const GroupBeam &beam, TrialRng &rng) {
    struct Hit {
        std::size_t site;
        double p;
        double d;
    };
    ++step_;
    const auto in_group = [&](std::size_t i) { return std::find(group.begin(), group.end(), i) != group.end(); };
    const int col = layout_.column(group.front());
    const bool upper = layout_.upper_half(group.front());
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < layout_.size(); ++i) {
        if (layout_.is_output(i)) continue;
        const Site &s = layout_.sites[i];
        const double d = std::hypot(s.x - beam.center.x, s.y - beam.center.y);
        double p = 0.0;
        const bool g = in_group(i);
        if (g || measured_[i] || config_.pf_model == PfModel::exact) {
            p = probability_from_peak(beam.s_peak, d, config_.r);
        } else if (s.x == col + 1 && layout_.upper_half(i) == upper) {
            p = config_.p_f;
        }
        if (g || p >= kProjectionThreshold) hits.push_back({i, p, d});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit &a, const Hit &b) { return a.d < b.d; });

    GroupResult result;
    std::size_t projected = 0;
    int zeros = 0;
    for (const auto &h : hits) {
        if (!(rng.uniform() < h.p)) continue;
        const int m = world_.project(h.site, rng.uniform());
        if (in_group(h.site)) {
            ++projected;
            if (m == 0) ++zeros;
        } else if (measured_[h.site]) {
            if (m == 0) ++result.stray_fluorescence;
        } else {
            hidden_.push_back({h.site, m, step_});
        }
    }
    result.all_projected = projected == group.size();
    for (std::size_t i : group) measured_[i] = true;
    result.observation.ambiguous = config_.ambiguous_signal;
    result.observation.bright_count = config_.ambiguous_signal ? std::min(zeros, 1) : zeros;
    return result;
}

Eigen::Vector4cd World2D::output_state() {
    const std::vector<std::size_t> out{layout_.upper_output, layout_.lower_output};
    return world_.readout(out).to_eigen();
}

Controller2D::Controller2D(const ZigzagLayout &layout, Protocol2DConfig config)
    : layout_(layout),
      config_(config),
      positions_(layout.points()),
      ledger_(layout.size(), 0.0),
      since_(layout.size(), 0.0),
      known_(layout.size(), -1),
      outcomes_(layout.size(), -1),
      projected_(layout.size(), false) {
    config_.validate();
}

GroupBeam Controller2D::beam_for(std::span<const std::size_t> group) const {
    const auto &first = layout_.sites[group.front()];
    double y = layout_.upper_half(group.front()) ? 0.0 : double(layout_.m_sep);
    if (config_.beam_on_group) {
        y = 0.0;
        for (std::size_t i : group) y += layout_.sites[i].y;
        y /= double(group.size());
    }
    GroupBeam b;
    b.center = {double(first.x) - config_.offset_n, y};
    double far = 0.0;
    for (std::size_t i : group)
        far = std::max(far, std::sqrt(distance_squared(positions_[i], b.center)));
    b.s_peak = peak_exponent_for(config_.p_t, far, config_.r);
    return b;
}

std::vector<Pulse> Controller2D::prepare(std::span<const std::size_t> group, unsigned flips) {
    const auto beam = beam_for(group);
    const int col = layout_.column(group.front());
    const bool upper = layout_.upper_half(group.front());
    std::vector<std::size_t> window;
    std::vector<double> phi;
    reset_.clear();
    for (std::size_t i = 0; i < layout_.size(); ++i) {
        if (layout_.is_output(i)) continue;
        const double d = std::sqrt(distance_squared(positions_[i], beam.center));
        const bool reached = probability_from_peak(beam.s_peak, d, config_.r) >= kProjectionThreshold;
        const auto k = std::find(group.begin(), group.end(), i);
        if (k != group.end()) {
            window.push_back(i);
            if (projected_[i]) {
                const int bit = int((flips >> (k - group.begin())) & 1u);
                phi.push_back(wrap(kPi * bit - since_[i]));
            } else {
                phi.push_back(kPi - ledger_[i]);
            }
        } else if (projected_[i]) {
            if (!reached) continue;
            window.push_back(i);
            reset_.push_back(i);
            phi.push_back(wrap(kPi * (1 - known_[i]) - since_[i]));
        } else {
            const bool neighbour = layout_.column(i) == col + 1 && layout_.upper_half(i) == upper;
            if (!neighbour && !(config_.pf_model == PfModel::exact && reached)) continue;
            window.push_back(i);
            phi.push_back(kPi - ledger_[i]);
        }
    }
    std::vector<Point> pts;
    for (std::size_t i : window) pts.push_back(positions_[i]);
    const auto theta = solve_angles(build_crosstalk(pts, config_.r), phi);
    const auto net = replay_pulses(positions_, pts, theta, config_.r);
    for (std::size_t i = 0; i < net.size(); ++i) {
        ledger_[i] += net[i];
        since_[i] += net[i];
    }
    std::vector<Pulse> pulses;
    for (std::size_t k = 0; k < pts.size(); ++k) pulses.push_back({pts[k], theta[k]});
    return pulses;
}

void Controller2D::after_measurement(std::span<const std::size_t> group) {
    for (std::size_t i : group) {
        projected_[i] = true;
        since_[i] = 0.0;
    }
    for (std::size_t i : reset_) {
        known_[i] = 1;
        since_[i] = 0.0;
    }
    reset_.clear();
}

void Controller2D::record(std::span<const std::size_t> group, unsigned outcomes, unsigned cumulative_flips) {
    for (std::size_t k = 0; k < group.size(); ++k) {
        const std::size_t i = group[k];
        outcomes_[i] = int((outcomes >> k) & 1u);
        known_[i] = outcomes_[i] ^ int((cumulative_flips >> k) & 1u);
    }
}

Eigen::Vector4cd Controller2D::correct_output(const Eigen::Vector4cd &physical, const LinkCompilation &link) const {
    const auto undo = [&](std::size_t site) {
        return Gate(make_rotation(Axis::Y, kPi / 2).adjoint() * make_rotation(Axis::X, -ledger_[site]));
    };
    Eigen::Vector4cd v = kron(undo(layout_.upper_output), undo(layout_.lower_output)) * physical;
    std::array<int, 4> b{0, 0, 0, 0};
    for (std::size_t i = 0; i < layout_.size(); ++i) {
        if (outcomes_[i] != 1) continue;
        for (int k = 0; k < 4; ++k) b[k] ^= link.byproduct[i][k];
    }
    const Matrix4cd p = kron(pauli_power(b[0], b[1]), pauli_power(b[2], b[3]));
    return p.adjoint() * v;
}

TrialResult2D run_cz_link(const Eigen::Vector2cd &upper, const Eigen::Vector2cd &lower, const ZigzagLayout &layout,
                          const LinkCompilation &link, const Protocol2DConfig &config, TrialRng &rng) {
    Controller2D ctl(layout, config);
    World2D world(layout, upper, lower, config);
    TrialResult2D res;
    for (const auto &group : layout.schedule) {
        const auto beam = ctl.beam_for(group);
        world.apply(ctl.prepare(group));
        auto gr = world.column_measure(group, beam, rng);
        ctl.after_measurement(group);
        res.stray_fluorescence += gr.stray_fluorescence;
        res.bright_counts.push_back(gr.observation.bright_count);
        if (!gr.all_projected) {
            res.target_miss = true;
            break;
        }
        Disambiguator dis(group.size(), gr.observation);
        while (!dis.done() && !res.target_miss) {
            const unsigned s = dis.next_flips();
            world.apply(ctl.prepare(group, s));
            gr = world.column_measure(group, beam, rng);
            ctl.after_measurement(group);
            res.stray_fluorescence += gr.stray_fluorescence;
            if (!gr.all_projected) {
                res.target_miss = true;
                break;
            }
            dis.observe(s, gr.observation);
            if (dis.attempts() > 7) throw InternalError("disambiguation did not converge");
        }
        if (res.target_miss) break;
        ctl.record(group, dis.outcome(), dis.cumulative_flips());
        res.max_attempts = std::max(res.max_attempts, dis.attempts());
        res.total_attempts += dis.attempts();
    }
    res.outcomes = ctl.outcomes();
    res.hidden_events = world.hidden_events();
    if (res.target_miss) return res;

    const Eigen::Vector4cd corrected = ctl.correct_output(world.output_state(), link);
    const Eigen::Vector4cd ideal = link.reference * kron(upper, lower).normalized();
    res.fidelity = fidelity(Eigen::VectorXcd(corrected), Eigen::VectorXcd(ideal));
    res.completed = true;
    return res;
}

std::vector<std::size_t> junction_path(const ZigzagLayout &layout) {
    std::vector<std::size_t> path{find_site(layout, {layout.junction - 1, 0}), find_site(layout, {layout.junction, 0})};
    for (std::size_t i : layout.link) path.push_back(i);
    path.push_back(find_site(layout, {layout.landing, layout.m_sep}));
    return path;
}

std::vector<LogicalTerm> logical_mixture_2d(const ZigzagLayout &layout, const Eigen::Vector2cd &psi,
                                            std::span<const int> outcomes, double p_f) {
    if (!(p_f >= 0 && p_f + p_f * p_f + p_f * p_f * p_f <= 1)) throw InvalidArgument("p_f out of range");
    const auto path = junction_path(layout);
    if (path.size() < 5) throw InvalidLayout("link too short for the three-site branch");
    if (outcomes.size() < 4) throw InvalidArgument("need outcomes for four path sites");
    const std::size_t next = find_site(layout, {layout.junction + 1, 0});
    const double w[4] = {1 - p_f - p_f * p_f - p_f * p_f * p_f, p_f, p_f * p_f, p_f * p_f * p_f};

    std::vector<LogicalTerm> terms;
    for (int k = 0; k < 4; ++k) {
        if (w[k] <= 0) continue;
        // measured: path[0..k]; carriers: the junction alone, or the chain
        // successor and the first unmeasured link site
        std::vector<std::size_t> measured(path.begin(), path.begin() + k + 1);
        std::vector<std::size_t> carriers;
        if (k == 0) {
            carriers = {path[1]};
        } else {
            carriers = {next, path[std::size_t(k) + 1]};
        }
        std::vector<std::size_t> included = measured;
        included.insert(included.end(), carriers.begin(), carriers.end());
        std::vector<Site> sub;
        for (std::size_t i : included) sub.push_back(layout.sites[i]);
        const LatticeGeometry geo(sub);

        std::vector<Eigen::Vector2cd> init(sub.size(), Eigen::Vector2cd(1, 1) / std::sqrt(2.0));
        init[0] = psi.normalized();
        StateVector sv = StateVector::product(init);
        for (const auto &[a, b] : geo.edges()) sv.apply_cz(a, b);
        const Gate prep = make_rotation(Axis::X, kPi) * make_rotation(Axis::Y, kPi / 2);
        for (std::size_t j = 0; j < measured.size(); ++j) {
            sv.apply(j, prep);
            sv.project(j, outcomes[j]);
        }
        std::vector<std::size_t> keep;
        for (std::size_t j = measured.size(); j < included.size(); ++j) keep.push_back(j);
        terms.push_back({w[k], k - 1, carriers, extract_subsystem(sv, keep)});
    }
    return terms;
}

Eigen::VectorXcd two_particle_state(const LogicalTerm &term) {
    if (term.carriers.size() != 2) return term.state;
    const Gate h = gates::hadamard();
    const Gate link = term.link_steps % 2 ? Gate(Gate::Identity()) : h;
    return kron(h, link) * term.state;
}

}  // namespace wbqc
