#include "poslo/seed_manager.hpp"

namespace poslo {

SeedNode sc(SuiteId suite, const SeedNode& source, uint8_t d1, uint32_t i1) {
    if (d1 > source.depth)
        throw StateError("sc: target above the source node");
    uint8_t steps = source.depth - d1;
    uint64_t lo = uint64_t(source.index) << steps;
    if (i1 < lo || i1 >= lo + (uint64_t(1) << steps))
        throw StateError("sc: target outside the source subtree");
    uint32_t rel = i1 - uint32_t(lo);
    Seed x = source.value;
    for (int j = steps - 1; j >= 0; j--) x = prf(suite, (rel >> j) & 1, x);
    return SeedNode{d1, i1, x};
}

void SeedStack::push(const SeedNode& n) {
    if (nodes_.size() >= cap_) throw StateError("seed stack overflow");
    if (!nodes_.empty() && nodes_.back().depth <= n.depth)
        throw StateError("seed stack depth order violated");
    nodes_.push_back(n);
}

SeedNode SeedStack::pop() {
    if (nodes_.empty()) throw StateError("seed stack underflow");
    SeedNode n = nodes_.back();
    nodes_.pop_back();
    return n;
}

void SeedStack::serialize(Bytes& out) const {
    out.push_back(static_cast<uint8_t>(nodes_.size()));
    for (const auto& n : nodes_) {
        out.push_back(n.depth);
        put_be32(out, n.index);
        out.insert(out.end(), n.value.begin(), n.value.end());
    }
}

SeedStack SeedStack::deserialize(Reader& r, uint32_t capacity) {
    SeedStack s(capacity);
    uint8_t count = r.u8();
    for (uint8_t k = 0; k < count; k++) {
        SeedNode n;
        n.depth = r.u8();
        n.index = r.be32();
        const uint8_t* v = r.take(kSeedBytes);
        std::memcpy(n.value.data(), v, kSeedBytes);
        s.push(n);  // push re-checks the ordering invariant
    }
    return s;
}

Seed so(SuiteId suite, SeedStack& ds, const SeedNode& root, uint32_t i) {
    if (i >= (uint64_t(1) << root.depth))
        throw StateError("seed tree exhausted");
    uint8_t d1 = 0;
    uint32_t i1 = i;
    // Sibling subtrees complete at equal depth merge into their parent.
    while (!ds.empty() && ds.top().depth == d1) {
        ds.pop();
        d1++;
        i1 >>= 1;
    }
    SeedNode covering = sc(suite, root, d1, i1);
    ds.push(covering);
    return sc(suite, covering, 0, i).value;
}

Seed sr(SuiteId suite, const SeedStack& ds, uint32_t i_query) {
    if (ds.empty()) throw SeedNotDisclosed(i_query);
    const auto& nodes = ds.nodes();
    // Top node covers the highest range; anything past it is undisclosed.
    for (size_t k = nodes.size(); k-- > 0;) {
        const SeedNode& n = nodes[k];
        uint64_t lo = uint64_t(n.index) << n.depth;
        uint64_t hi = uint64_t(n.index + 1) << n.depth;
        if (i_query >= hi && k + 1 == nodes.size())
            throw SeedNotDisclosed(i_query);
        if (i_query >= lo && i_query < hi)
            return sc(suite, n, 0, i_query).value;
    }
    throw SeedNotDisclosed(i_query);
}

}  // namespace poslo
