#pragma once

// Binary seed-derivation tree and the disclosed-seed stack. The tree root
// generates every per-epoch seed; completed sibling subtrees in the stack
// are merged into their parent, keeping disclosure O(log n1).

#include "poslo/common.hpp"
#include "poslo/primitives.hpp"

namespace poslo {

struct SeedNode {
    uint8_t depth = 0;   // 0 = leaf level
    uint32_t index = 0;  // position within its level
    Seed value{};

    bool operator==(const SeedNode&) const = default;
};

// Derive the node (d1, i1) from `source` by walking down the tree, taking
// PRF_0 for a left step and PRF_1 for a right step. The target must lie in
// the source's subtree; (d1,i1) == (source.depth, source.index) is the
// zero-step identity.
SeedNode sc(SuiteId suite, const SeedNode& source, uint8_t d1, uint32_t i1);

// Disclosed-seed stack: fixed capacity of D slots, depths strictly
// decreasing bottom-to-top, covering the left-aligned prefix of leaves.
class SeedStack {
public:
    SeedStack() = default;
    explicit SeedStack(uint32_t capacity) : cap_(capacity) {}

    size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    uint32_t capacity() const { return cap_; }
    const SeedNode& top() const { return nodes_.back(); }
    const std::vector<SeedNode>& nodes() const { return nodes_; }

    void push(const SeedNode& n);
    SeedNode pop();

    // Wire format: 1-byte count, then (depth, index_be32, value) records
    // bottom-to-top.
    void serialize(Bytes& out) const;
    static SeedStack deserialize(Reader& r, uint32_t capacity);

    bool operator==(const SeedStack&) const = default;

private:
    uint32_t cap_ = 0;
    std::vector<SeedNode> nodes_;
};

// Advance disclosure to epoch i: merge completed sibling subtrees, push the
// covering node, and return the epoch seed x0[i]. `ds` must be the stack
// for epoch i-1 (empty for i = 0). Throws StateError when i >= 2^D.
Seed so(SuiteId suite, SeedStack& ds, const SeedNode& root, uint32_t i);

// Retrieve the seed of a previously disclosed epoch. Non-destructive scan
// from the top; throws SeedNotDisclosed if the stack does not cover the
// query.
Seed sr(SuiteId suite, const SeedStack& ds, uint32_t i_query);

}  // namespace poslo
