#include "fathom/link.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace fathom::links {

std::size_t IndexedLink::saddle_count() const {
    std::size_t n = 0;
    for (const auto& s : separated_)
        if (s.index == OrbitIndex::Saddle) ++n;
    return n;
}

std::size_t IndexedLink::count_index(OrbitIndex i) const {
    std::size_t n = 0;
    for (const auto& p : pairs_) n += (p.ia == i) + (p.ib == i);
    for (const auto& s : separated_) n += (s.index == i);
    return n;
}

bool IndexedLink::has_orbit(OrbitId k) const { return index_of(k).has_value(); }

std::optional<OrbitIndex> IndexedLink::index_of(OrbitId k) const {
    for (const auto& p : pairs_) {
        if (p.a == k) return p.ia;
        if (p.b == k) return p.ib;
    }
    for (const auto& s : separated_)
        if (s.id == k) return s.index;
    return std::nullopt;
}

bool IndexedLink::is_pair_member(OrbitId k) const {
    for (const auto& p : pairs_)
        if (p.a == k || p.b == k) return true;
    return false;
}

std::optional<OrbitId> IndexedLink::partner_of(OrbitId k) const {
    for (const auto& p : pairs_) {
        if (p.a == k) return p.b;
        if (p.b == k) return p.a;
    }
    return std::nullopt;
}

OrbitId IndexedLink::add_separated(OrbitIndex i) {
    return add_separated_ranked(i, next_rank_++);
}

OrbitId IndexedLink::add_separated_ranked(OrbitIndex i, std::uint32_t rank) {
    OrbitId id = next_id_++;
    next_rank_ = std::max(next_rank_, rank + 1);
    separated_.push_back({id, i, rank});
    return id;
}

void IndexedLink::add_pair(OrbitIndex ia, OrbitIndex ib) {
    if (ia == OrbitIndex::Saddle || ib == OrbitIndex::Saddle)
        throw Error("a saddle orbit cannot be a Hopf pair component");
    HopfPair p;
    p.a = next_id_++;
    p.b = next_id_++;
    p.ia = ia;
    p.ib = ib;
    p.rank = next_rank_++;
    pairs_.push_back(p);
}

IndexedLink make_hopf(OrbitIndex i, OrbitIndex j) {
    IndexedLink l;
    l.add_pair(i, j);
    return l;
}

IndexedLink make_unknot(OrbitIndex i) {
    IndexedLink l;
    l.add_separated(i);
    return l;
}

IndexedLink split_sum(const IndexedLink& l1, const IndexedLink& l2) {
    IndexedLink out;
    auto absorb = [&out](const IndexedLink& src) {
        std::uint32_t roff = out.next_rank_;
        for (const auto& p : src.pairs_) {
            HopfPair q;
            q.a = out.next_id_++;
            q.b = out.next_id_++;
            q.ia = p.ia;
            q.ib = p.ib;
            q.rank = p.rank + roff;
            out.pairs_.push_back(q);
        }
        for (const auto& s : src.separated_)
            out.separated_.push_back({out.next_id_++, s.index, s.rank + roff});
        out.next_rank_ = std::max(out.next_rank_, src.next_rank_ + roff);
    };
    absorb(l1);
    absorb(l2);
    return out;
}

IndexedLink remove_component(const IndexedLink& l, OrbitId k) {
    auto idx = l.index_of(k);
    if (!idx) throw SelectorError("unknown link component");
    if (*idx == OrbitIndex::Saddle) throw Error("saddle components cannot be removed");
    IndexedLink out = l;
    for (std::size_t i = 0; i < out.pairs_.size(); ++i) {
        const HopfPair& p = out.pairs_[i];
        if (p.a == k || p.b == k) {
            SeparatedOrbit survivor;
            survivor.id = (p.a == k) ? p.b : p.a;
            survivor.index = (p.a == k) ? p.ib : p.ia;
            survivor.rank = out.next_rank_++;
            out.pairs_.erase(out.pairs_.begin() + static_cast<std::ptrdiff_t>(i));
            out.separated_.push_back(survivor);
            return out;
        }
    }
    for (std::size_t i = 0; i < out.separated_.size(); ++i) {
        if (out.separated_[i].id == k) {
            out.separated_.erase(out.separated_.begin() + static_cast<std::ptrdiff_t>(i));
            return out;
        }
    }
    throw SelectorError("unknown link component");
}

IndexedLink op_i(const IndexedLink& l1, const IndexedLink& l2) {
    IndexedLink out = split_sum(l1, l2);
    out.add_separated(OrbitIndex::Saddle);
    return out;
}

IndexedLink op_ii(const IndexedLink& l1, const IndexedLink& l2, OrbitId k2) {
    auto idx = l2.index_of(k2);
    if (!idx) throw SelectorError("unknown link component");
    if (*idx == OrbitIndex::Saddle)
        throw Error("operation II removes a component of index 0 or 2");
    IndexedLink out = split_sum(l1, remove_component(l2, k2));
    out.add_separated(OrbitIndex::Saddle);
    return out;
}

IndexedLink op_iii(const IndexedLink& l1, const IndexedLink& l2, OrbitId k1, OrbitId k2) {
    auto i1 = l1.index_of(k1);
    auto i2 = l2.index_of(k2);
    if (!i1 || !i2) throw SelectorError("unknown link component");
    if (*i1 != OrbitIndex::Repulsive)
        throw Error("operation III removes an index-0 component from its first argument");
    if (*i2 != OrbitIndex::Attractive)
        throw Error("operation III removes an index-2 component from its second argument");
    IndexedLink out = split_sum(remove_component(l1, k1), remove_component(l2, k2));
    out.add_separated(OrbitIndex::Saddle);
    return out;
}

namespace {

std::string pair_token(OrbitIndex ia, OrbitIndex ib) {
    auto lo = std::min(index_digit(ia), index_digit(ib));
    auto hi = std::max(index_digit(ia), index_digit(ib));
    if (lo == '0' && hi == '2') return "h";
    return std::string("h[") + lo + "," + hi + "]";
}

std::string join(const std::vector<std::string>& toks) {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out += "·";
        out += toks[i];
    }
    return out;
}

} // namespace

CanonicalLink canonicalize(const IndexedLink& l) {
    std::vector<std::string> pair_toks;
    for (const auto& p : l.pairs()) pair_toks.push_back(pair_token(p.ia, p.ib));
    std::sort(pair_toks.begin(), pair_toks.end());

    std::size_t d0 = 0, d2 = 0, u = 0;
    for (const auto& s : l.separated()) {
        if (s.index == OrbitIndex::Repulsive) ++d0;
        else if (s.index == OrbitIndex::Attractive) ++d2;
        else ++u;
    }

    std::vector<std::string> toks = pair_toks, shape_toks;
    for (const auto& t : pair_toks) shape_toks.push_back(t == "h" ? "h" : t);
    for (std::size_t i = 0; i < d0; ++i) { toks.push_back("d0"); shape_toks.push_back("d"); }
    for (std::size_t i = 0; i < d2; ++i) { toks.push_back("d2"); shape_toks.push_back("d"); }
    for (std::size_t i = 0; i < u; ++i) { toks.push_back("u"); shape_toks.push_back("u"); }

    CanonicalLink c;
    c.text = join(toks);
    c.shape = join(shape_toks);
    return c;
}

bool links_equal(const IndexedLink& l1, const IndexedLink& l2) {
    return canonicalize(l1) == canonicalize(l2);
}

IndexedLink parse_link(std::string_view text) {
    IndexedLink out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto parse_index = [&](std::size_t at) -> OrbitIndex {
        char c = text[at];
        if (c == '0') return OrbitIndex::Repulsive;
        if (c == '1') return OrbitIndex::Saddle;
        if (c == '2') return OrbitIndex::Attractive;
        throw ParseError("expected orbit index 0, 1 or 2", at);
    };
    bool expect_component = true;
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        if (!expect_component) {
            // separator: '*' or UTF-8 middle dot
            if (text[i] == '*') { ++i; }
            else if (text.substr(i, 2) == "·") { i += 2; }
            else throw ParseError("expected component separator", i);
            expect_component = true;
            continue;
        }
        char c = text[i];
        if (c == 'h') {
            ++i;
            if (i < text.size() && text[i] == '[') {
                if (i + 4 >= text.size() || text[i + 2] != ',' || text[i + 4] != ']')
                    throw ParseError("malformed pair indices, expected h[i,j]", i);
                out.add_pair(parse_index(i + 1), parse_index(i + 3));
                i += 5;
            } else {
                out.add_pair(OrbitIndex::Repulsive, OrbitIndex::Attractive);
            }
        } else if (c == 'd') {
            if (i + 1 >= text.size()) throw ParseError("expected d0 or d2", i);
            OrbitIndex idx = parse_index(i + 1);
            if (idx == OrbitIndex::Saddle) throw ParseError("d components have index 0 or 2", i + 1);
            out.add_separated(idx);
            i += 2;
        } else if (c == 'u') {
            out.add_separated(OrbitIndex::Saddle);
            ++i;
        } else {
            throw ParseError("unexpected character in link notation", i);
        }
        expect_component = false;
    }
    if (expect_component && out.component_count() == 0 && !text.empty())
        throw ParseError("empty link notation", 0);
    return out;
}

} // namespace fathom::links
