/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cvsynth/mitm.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <tuple>

#include "cvsynth/error.hpp"
#include "cvsynth/nns.hpp"
#include "cvsynth/parallel.hpp"
#include "search_rep.hpp"

namespace cvsynth {

namespace {

constexpr std::uint16_t kNoLetter = 0xFFFF;
// Candidates inside this inflated radius get the exact recheck.
constexpr double kRadiusSlack = 1.0 + 1e-9;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void validate_target(const UMat& target, int dim) {
    if (target.rows() != dim || target.cols() != dim) {
        throw DimensionMismatch("target is " + std::to_string(target.rows()) + "x" + std::to_string(target.cols()) +
                                ", gate set acts on dimension " + std::to_string(dim));
    }
    if (unitarity_residual(target) > Tolerances::validation) throw ValidationError("target is not unitary");
}

std::vector<std::size_t> free_reduce(const GateSet& gs, const std::vector<std::size_t>& letters) {
    std::vector<std::size_t> out;
    for (std::size_t l : letters) {
        if (!out.empty() && gs.inverse_index(out.back()) == l) {
            out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    return out;
}

}  // namespace

UMat word_product(const GateSet& gs, const Word& w) {
    UMat p = identity(gs.dim());
    for (std::size_t l : w.letters) {
        if (l >= gs.basis().size()) throw IntegrityError("word letter index out of range");
        p = p * gs.basis()[l].matrix;
    }
    if (w.suffix >= gs.suffixes().size()) throw IntegrityError("word suffix index out of range");
    return p * gs.suffixes()[w.suffix].matrix;
}

int word_vcount(const GateSet& gs, const Word& w) {
    int total = 0;
    for (std::size_t l : w.letters) total += gs.basis().at(l).vcount_weight;
    return total;
}

std::string word_text(const GateSet& gs, const Word& w) {
    std::string out;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        out += gs.basis().at(*it).label;
        out += ' ';
    }
    return out + "| suffix=" + gs.suffixes().at(w.suffix).label;
}

Circuit word_circuit(const GateSet& gs, const Word& w) {
    Circuit c;
    c.num_qubits = gs.num_qubits();
    if (c.num_qubits == 0) throw UnsupportedError("circuit emission needs a qubit gate set");
    std::vector<int> all(static_cast<std::size_t>(c.num_qubits));
    for (int q = 0; q < c.num_qubits; ++q) all[static_cast<std::size_t>(q)] = q;
    const UMat& s = gs.suffixes().at(w.suffix).matrix;
    if (dist_phase_invariant(s, identity(gs.dim())) > 0.0) c.gates.push_back(suffix_gate(gs, w.suffix, all));
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) c.gates.push_back(basis_gate(gs, *it, all));
    return c;
}

std::string to_string(SynthStatus s) {
    switch (s) {
        case SynthStatus::ok:
            return "ok";
        case SynthStatus::limit_exceeded:
            return "limit_exceeded";
        case SynthStatus::not_found:
            return "not_found";
    }
    return "?";
}

int Limits::resolved_max_vcount(int dim) const {
    if (max_vcount >= 0) return max_vcount;
    if (dim == 2) return 28;
    if (dim == 4) return 10;
    return 6;
}

std::vector<std::size_t> Frontier::letters(int level, std::size_t idx) const {
    std::vector<std::size_t> out;
    for (int l = level; l >= 1; --l) {
        const Level& lv = levels.at(static_cast<std::size_t>(l));
        out.push_back(lv.first.at(idx));
        idx = lv.parent[idx];
    }
    return out;
}

UMat Frontier::product(int level, std::size_t idx) const {
    const SearchRep rep(dim);
    return rep.to_matrix(levels.at(static_cast<std::size_t>(level)).prod.data() + idx * static_cast<std::size_t>(width));
}

std::size_t Frontier::memory_bytes() const {
    std::size_t total = 0;
    for (const auto& lv : levels) {
        total += lv.prod.capacity() * sizeof(double) + lv.parent.capacity() * sizeof(std::uint32_t) +
                 (lv.first.capacity() + lv.last.capacity()) * sizeof(std::uint16_t);
    }
    return total;
}

Frontier make_frontier(const GateSet& gs) {
    if (gs.basis().size() >= kNoLetter) throw UnsupportedError("gate set has too many letters");
    const SearchRep rep(gs.dim());
    Frontier f;
    f.dim = gs.dim();
    f.width = rep.width();
    Frontier::Level l0;
    l0.prod.resize(static_cast<std::size_t>(f.width));
    rep.from_matrix(identity(gs.dim()), l0.prod.data());
    l0.parent = {0};
    l0.first = {kNoLetter};
    l0.last = {kNoLetter};
    f.levels.push_back(std::move(l0));
    return f;
}

namespace {

std::size_t next_level_size(const Frontier& f, std::size_t nb) {
    const auto& top = f.levels.back();
    return f.levels.size() == 1 ? nb : top.size() * (nb - 1);
}

std::size_t level_bytes(std::size_t n, int width) {
    return n * (static_cast<std::size_t>(width) * sizeof(double) + sizeof(std::uint32_t) + 2 * sizeof(std::uint16_t));
}

void expand_with(Frontier& f, const GateSet& gs, const SearchRep& rep, const std::vector<double>& letters,
                 std::size_t workers) {
    const std::size_t nb = gs.basis().size();
    const std::size_t w = static_cast<std::size_t>(f.width);
    const auto& top = f.levels.back();
    const std::size_t n = next_level_size(f, nb);
    if (n >= std::numeric_limits<std::uint32_t>::max()) throw UnsupportedError("frontier exceeds 2^32 words");
    const bool root = f.levels.size() == 1;
    const std::size_t per = root ? nb : nb - 1;

    Frontier::Level next;
    next.prod.resize(n * w);
    next.parent.resize(n);
    next.first.resize(n);
    next.last.resize(n);
    parallel_chunks(top.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t e = begin; e < end; ++e) {
            const std::uint16_t head = top.first[e];
            const std::size_t skip = root ? nb : gs.inverse_index(head);
            std::size_t k = e * per;
            for (std::size_t b = 0; b < nb; ++b) {
                if (b == skip) continue;
                rep.mul(letters.data() + b * w, top.prod.data() + e * w, next.prod.data() + k * w);
                next.parent[k] = static_cast<std::uint32_t>(e);
                next.first[k] = static_cast<std::uint16_t>(b);
                next.last[k] = root ? static_cast<std::uint16_t>(b) : top.last[e];
                ++k;
            }
        }
    });
    f.levels.push_back(std::move(next));
}

std::vector<double> letter_table(const GateSet& gs, const SearchRep& rep) {
    const std::size_t w = static_cast<std::size_t>(rep.width());
    std::vector<double> out(gs.basis().size() * w);
    for (std::size_t b = 0; b < gs.basis().size(); ++b) rep.from_matrix(gs.basis()[b].matrix, out.data() + b * w);
    return out;
}

std::vector<double> suffix_table(const GateSet& gs, const SearchRep& rep) {
    const std::size_t w = static_cast<std::size_t>(rep.width());
    std::vector<double> out(gs.suffixes().size() * w);
    for (std::size_t s = 0; s < gs.suffixes().size(); ++s) rep.from_matrix(gs.suffixes()[s].matrix, out.data() + s * w);
    return out;
}

}  // namespace

Frontier expand_frontier(Frontier f, const GateSet& gs, std::size_t workers) {
    const SearchRep rep(gs.dim());
    if (f.dim != gs.dim()) throw DimensionMismatch("frontier and gate set dimensions differ");
    expand_with(f, gs, rep, letter_table(gs, rep), workers);
    return f;
}

struct MitmSearcher::Impl {
    GateSet gs;
    Limits limits;
    SearchRep rep;
    std::vector<double> letters;
    std::vector<double> suffixes;
    Frontier frontier;
    std::vector<std::unique_ptr<NnIndex>> trees;
    std::size_t workers;

    Impl(GateSet g, Limits l)
        : gs(std::move(g)),
          limits(l),
          rep(gs.dim()),
          letters(letter_table(gs, rep)),
          suffixes(suffix_table(gs, rep)),
          frontier(make_frontier(gs)),
          trees(1),
          workers(l.workers == 0 ? default_workers() : l.workers) {
        if (gs.suffixes().empty()) throw ValidationError("search needs at least one suffix");
    }

    std::size_t memory() const {
        std::size_t total = frontier.memory_bytes();
        for (const auto& t : trees) {
            if (t) total += t->memory_bytes();
        }
        return total;
    }

    std::size_t ns() const { return gs.suffixes().size(); }

    // False when the next structure would exceed the memory limit.
    bool ensure_level(int i, std::string& why) {
        while (frontier.half_depth() < i) {
            const std::size_t n = next_level_size(frontier, gs.basis().size());
            const std::size_t need = level_bytes(n, frontier.width);
            if (memory() + need > limits.max_memory_bytes) {
                why = "memory limit: frontier level " + std::to_string(frontier.half_depth() + 1) + " needs " +
                      std::to_string(need >> 20) + " MiB";
                return false;
            }
            expand_with(frontier, gs, rep, letters, workers);
        }
        return true;
    }

    std::size_t tree_points(int i) const {
        return frontier.size(i) * ns() * static_cast<std::size_t>(rep.copies());
    }

    bool ensure_tree(int i, std::string& why) {
        if (!ensure_level(i, why)) return false;
        if (static_cast<int>(trees.size()) <= i) trees.resize(static_cast<std::size_t>(i) + 1);
        if (trees[static_cast<std::size_t>(i)]) return true;
        const std::size_t nw = frontier.size(i);
        if (nw * ns() >= std::numeric_limits<std::uint32_t>::max()) {
            why = "round " + std::to_string(i) + " index exceeds 2^32 owners";
            return false;
        }
        const std::size_t points = tree_points(i);
        const std::size_t need = points * NnIndex::bytes_per_point(rep.edim());
        if (memory() + need > limits.max_memory_bytes) {
            why = "memory limit: round " + std::to_string(i) + " index needs " + std::to_string(need >> 20) + " MiB";
            return false;
        }
        PointBuffer buf(rep.edim());
        const std::size_t stride = static_cast<std::size_t>(buf.stride());
        buf.rec.resize(points * stride);
        const auto& lv = frontier.levels[static_cast<std::size_t>(i)];
        const std::size_t w = static_cast<std::size_t>(rep.width());
        const std::size_t copies = static_cast<std::size_t>(rep.copies());
        parallel_chunks(nw, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
            std::vector<double> x(w);
            for (std::size_t e = begin; e < end; ++e) {
                for (std::size_t s = 0; s < ns(); ++s) {
                    rep.mul(lv.prod.data() + e * w, suffixes.data() + s * w, x.data());
                    const std::size_t owner = e * ns() + s;
                    for (std::size_t c = 0; c < copies; ++c) {
                        double* out = buf.rec.data() + (owner * copies + c) * stride;
                        rep.embed_copy(x.data(), static_cast<int>(c), out);
                        out[rep.edim()] = static_cast<double>(owner);
                    }
                }
            }
        });
        trees[static_cast<std::size_t>(i)] = std::make_unique<NnIndex>(NnIndex::build(std::move(buf)));
        return true;
    }

    // Candidate ordering key (euclidean distance, round, pass, query index).
    struct Best {
        double e = std::numeric_limits<double>::infinity();
        int round = 0;
        int pass = 0;
        std::size_t a = 0;
        std::uint32_t owner = 0;
        bool any = false;

        bool before(const Best& o) const {
            return std::tie(e, round, pass, a) < std::tie(o.e, o.round, o.pass, o.a);
        }
    };

    Word assemble(int round, int pass, std::size_t a, std::uint32_t owner) const {
        Word w;
        if (round == 0) {
            w.suffix = owner;
            return w;
        }
        const int alevel = pass == 0 ? round - 1 : round;
        auto left = frontier.letters(alevel, a);
        const auto right = frontier.letters(round, owner / ns());
        left.insert(left.end(), right.begin(), right.end());
        w.letters = free_reduce(gs, left);
        w.suffix = owner % ns();
        return w;
    }

    SynthResult finish(SynthResult r, const UMat& target, const Word& w, SynthStatus status,
                       std::chrono::steady_clock::time_point t0) const {
        r.status = status;
        r.word = w;
        r.error = dist_phase_invariant(target, word_product(gs, w));
        r.vcount = word_vcount(gs, w);
        r.elapsed_s = seconds_since(t0);
        return r;
    }

    SynthResult run(const UMat& target, double eps, int max_k, bool accept) {
        const auto t0 = std::chrono::steady_clock::now();
        validate_target(target, gs.dim());
        const std::size_t w = static_cast<std::size_t>(rep.width());
        std::vector<double> t(w);
        rep.from_matrix(target, t.data());

        SynthResult result;
        result.epsilon = eps;
        const double r_accept = accept ? rep.euclid_radius(eps) * kRadiusSlack : 0.0;

        std::mutex best_mu;
        Best best;
        std::atomic<double> best_e{std::numeric_limits<double>::infinity()};
        auto offer = [&](const Best& cand) {
            if (cand.e > best_e.load(std::memory_order_relaxed)) return;
            std::lock_guard lock(best_mu);
            if (!best.any || cand.before(best)) {
                best = cand;
                best.any = true;
                best_e.store(cand.e);
            }
        };
        auto partial = [&](SynthStatus status, std::string why) {
            result.message = std::move(why);
            if (!best.any) {
                result.status = status;
                result.elapsed_s = seconds_since(t0);
                return result;
            }
            return finish(result, target, assemble(best.round, best.pass, best.a, best.owner), status, t0);
        };

        // Round 0: the suffixes alone.
        {
            std::vector<double> q(static_cast<std::size_t>(rep.edim()));
            std::vector<double> p(static_cast<std::size_t>(rep.edim()));
            rep.embed_copy(t.data(), 0, q.data());
            for (std::size_t s = 0; s < ns(); ++s) {
                ++result.nodes_expanded;
                double e2 = std::numeric_limits<double>::infinity();
                for (int c = 0; c < rep.copies(); ++c) {
                    rep.embed_copy(suffixes.data() + s * w, c, p.data());
                    e2 = std::min(e2, squared_distance(q.data(), p.data(), rep.edim()));
                }
                offer(Best{std::sqrt(e2), 0, 0, s, static_cast<std::uint32_t>(s), true});
                if (accept && std::sqrt(e2) < r_accept && rep.metric(suffixes.data() + s * w, t.data()) < eps) {
                    Word word;
                    word.suffix = s;
                    return finish(result, target, word, SynthStatus::ok, t0);
                }
            }
        }

        for (int i = 1; 2 * i - 1 <= max_k; ++i) {
            std::string why;
            if (!ensure_tree(i, why)) return partial(SynthStatus::limit_exceeded, why);
            const NnIndex& tree = *trees[static_cast<std::size_t>(i)];
            const auto& lv = frontier.levels[static_cast<std::size_t>(i)];
            for (int pass = 0; pass < 2; ++pass) {
                if (2 * i - 1 + pass > max_k) break;
                const int alevel = pass == 0 ? i - 1 : i;
                const auto& av = frontier.levels[static_cast<std::size_t>(alevel)];
                auto query = [&](std::size_t a, std::vector<double>& x, std::vector<double>& q, double radius) {
                    rep.adj_mul(av.prod.data() + a * w, t.data(), x.data());
                    rep.embed_copy(x.data(), 0, q.data());
                    return tree.nearest_within(q.data(), radius);
                };
                const std::size_t hit = parallel_find_first(av.size(), workers, [&](std::size_t a) {
                    thread_local std::vector<double> x;
                    thread_local std::vector<double> q;
                    thread_local std::vector<double> y;
                    x.resize(w);
                    y.resize(w);
                    q.resize(static_cast<std::size_t>(rep.edim()));
                    const double radius = std::max(r_accept, best_e.load(std::memory_order_relaxed) * (1.0 + 1e-12));
                    const auto h = query(a, x, q, radius);
                    if (!h) return false;
                    offer(Best{h->distance, i, pass, a, h->owner_id, true});
                    if (!(h->distance < r_accept)) return false;
                    const std::size_t e = h->owner_id / ns();
                    const std::size_t s = h->owner_id % ns();
                    if (alevel >= 1 && gs.inverse_index(av.last[a]) == lv.first[e]) return false;
                    rep.mul(lv.prod.data() + e * w, suffixes.data() + s * w, y.data());
                    rep.mul(av.prod.data() + a * w, y.data(), x.data());
                    return rep.metric(x.data(), t.data()) < eps;
                });
                if (hit == kNoIndex) {
                    result.nodes_expanded += av.size();
                    continue;
                }
                result.nodes_expanded += hit + 1;
                std::vector<double> x(w);
                std::vector<double> q(static_cast<std::size_t>(rep.edim()));
                const auto h = query(hit, x, q, r_accept);
                return finish(result, target, assemble(i, pass, hit, h->owner_id), SynthStatus::ok, t0);
            }
        }
        if (!accept) return partial(SynthStatus::ok, "");
        return partial(SynthStatus::limit_exceeded, "no word with at most " + std::to_string(max_k) + " letters");
    }
};

MitmSearcher::MitmSearcher(GateSet gs, Limits limits) : impl_(std::make_unique<Impl>(std::move(gs), limits)) {}
MitmSearcher::~MitmSearcher() = default;
MitmSearcher::MitmSearcher(MitmSearcher&&) noexcept = default;
MitmSearcher& MitmSearcher::operator=(MitmSearcher&&) noexcept = default;

SynthResult MitmSearcher::search(const UMat& target, double eps) {
    if (!(eps > Tolerances::epsilon_floor)) throw ValidationError("epsilon must exceed 1e-9");
    return impl_->run(target, eps, impl_->limits.resolved_max_vcount(impl_->gs.dim()), true);
}

SynthResult MitmSearcher::min_error(const UMat& target, int max_vcount) {
    if (max_vcount < 0) throw ValidationError("V-count must be nonnegative");
    return impl_->run(target, 0.0, max_vcount, false);
}

const GateSet& MitmSearcher::gateset() const { return impl_->gs; }
const Frontier& MitmSearcher::frontier() const { return impl_->frontier; }
std::size_t MitmSearcher::memory_bytes() const { return impl_->memory(); }

std::size_t MitmSearcher::index_points(int round) const {
    const auto r = static_cast<std::size_t>(round);
    if (r >= impl_->trees.size() || !impl_->trees[r]) return 0;
    return impl_->trees[r]->size();
}

SynthResult mitm_search(const UMat& target, double eps, const GateSet& gs, const Limits& limits) {
    return MitmSearcher(gs, limits).search(target, eps);
}

SynthResult brute_force_search(const UMat& target, double eps, const GateSet& gs, int max_k) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_target(target, gs.dim());
    if (!(eps > Tolerances::epsilon_floor)) throw ValidationError("epsilon must exceed 1e-9");
    if (max_k < 0) throw ValidationError("max_k must be nonnegative");
    const bool su2 = gs.dim() == 2;
    // d > 2 accepts by dist_su_d, which needs determinant-one representatives.
    auto norm = [&](const UMat& m) { return su2 ? m : to_special_unitary(m); };
    const UMat t = norm(target);
    std::vector<UMat> basis;
    std::vector<UMat> sfx;
    for (const auto& e : gs.basis()) basis.push_back(norm(e.matrix));
    for (const auto& e : gs.suffixes()) sfx.push_back(norm(e.matrix));
    auto accepts = [&](const UMat& m) { return (su2 ? dist_phase_invariant(t, m) : dist_su_d(t, m)) < eps; };

    SynthResult r;
    r.epsilon = eps;
    const std::size_t nb = basis.size();
    std::vector<std::size_t> letters;
    std::vector<UMat> prefix{identity(gs.dim())};
    for (int len = 0; len <= max_k; ++len) {
        letters.assign(static_cast<std::size_t>(len), 0);
        // Odometer over pruned words of this length, lexicographic in letter index.
        auto valid_from = [&](std::size_t j) {
            for (std::size_t k = std::max<std::size_t>(j, 1); k < letters.size(); ++k) {
                if (gs.inverse_index(letters[k - 1]) == letters[k]) return false;
            }
            return true;
        };
        auto advance = [&]() {
            for (std::size_t j = letters.size(); j-- > 0;) {
                if (++letters[j] < nb) {
                    for (std::size_t k = j + 1; k < letters.size(); ++k) letters[k] = 0;
                    return true;
                }
            }
            return false;
        };
        bool more = true;
        while (more) {
            if (valid_from(0)) {
                prefix.resize(1);
                for (std::size_t l : letters) prefix.push_back(prefix.back() * basis[l]);
                for (std::size_t s = 0; s < sfx.size(); ++s) {
                    ++r.nodes_expanded;
                    if (accepts(prefix.back() * sfx[s])) {
                        r.status = SynthStatus::ok;
                        r.word = Word{letters, s};
                        r.error = dist_phase_invariant(target, word_product(gs, r.word));
                        r.vcount = word_vcount(gs, r.word);
                        r.elapsed_s = seconds_since(t0);
                        return r;
                    }
                }
            }
            more = len > 0 && advance();
        }
    }
    r.status = SynthStatus::not_found;
    r.message = "no word with at most " + std::to_string(max_k) + " letters";
    r.elapsed_s = seconds_since(t0);
    return r;
}

double verify(const SynthResult& result, const UMat& target, const GateSet& gs) {
    const double d = dist_phase_invariant(target, word_product(gs, result.word));
    if (std::abs(d - result.error) > 1e-12) {
        throw IntegrityError("stored error " + std::to_string(result.error) + " but the word reaches " +
                             std::to_string(d));
    }
    if (result.status == SynthStatus::ok && result.epsilon > 0.0 && !(d < result.epsilon)) {
        throw IntegrityError("word misses its epsilon");
    }
    return d;
}

}  // namespace cvsynth
