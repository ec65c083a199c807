#include <gtest/gtest.h>

#include "support.hpp"

using namespace schroeder;
using testing_support::q;
using testing_support::Random;

namespace
{

// Every chain valid, chains span, and per-eigenvalue block sizes agree with
// kernel dimensions of powers.
void expect_jordan_basis(const ExactMatrix &u, const JordanBasis &basis)
{
    const std::size_t n = u.rows();
    std::vector<Vector> all;
    for (const auto &c : basis.chains) {
        EXPECT_TRUE(chain_is_valid(u, c));
        all.insert(all.end(), c.vectors.begin(), c.vectors.end());
    }
    ASSERT_EQ(all.size(), n);
    EXPECT_EQ(vector_rank(all, n), n);
    for (const auto &lambda : distinct_diagonal(u)) {
        EXPECT_EQ(basis.block_sizes(lambda), block_sizes_from_ranks(rank_sequence_oracle(u, lambda)));
    }
}

// Lower-triangular matrix with a Jordan-form corner and random rows below.
ExactMatrix random_extension(Random &rnd, std::size_t n, std::size_t big_n)
{
    const std::vector<Scalar> pool{q(1, 2), q(1, 4), q(-1, 3)};
    std::vector<JordanBlock> blocks;
    std::size_t used = 0;
    while (used < n) {
        const std::size_t s = static_cast<std::size_t>(rnd.integer(1, static_cast<long>(n - used)));
        blocks.push_back({rnd.pick(pool), s});
        used += s;
    }
    ExactMatrix u(big_n, big_n);
    const ExactMatrix j = jordan_matrix(blocks);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            u(r, c) = j(r, c);
        }
    }
    for (std::size_t r = n; r < big_n; ++r) {
        u(r, r) = rnd.pick(pool);
        for (std::size_t c = 0; c < r; ++c) {
            if (rnd.coin(0.4)) {
                u(r, c) = Scalar(rnd.integer(-2, 2));
            }
        }
    }
    return u;
}

std::size_t provenance_length(const JordanBasis &b, std::size_t block)
{
    return b.chains.at(b.provenance.at(block)).length();
}

} // namespace

TEST(Incremental, ExampleOperatorGainsABlock)
{
    const ExactMatrix u = build(testing_support::s_ex0(), 2).u;
    const JordanBasis basis = incremental_jordanize(u, 2);
    expect_jordan_basis(u, basis);
    EXPECT_EQ(basis.block_sizes(q(1, 4)), (std::vector<std::size_t>{2}));
    EXPECT_EQ(provenance_length(basis, 0), 1U);
    EXPECT_EQ(provenance_length(basis, 1), 2U);
    EXPECT_TRUE(projection_invariant_holds(basis, corner_blocks(u, 2)));
}

TEST(Incremental, DifferentEigenvalueExtendsTheChain)
{
    const ExactMatrix u{{q(1, 2), q(0)}, {q(1), q(1, 4)}};
    const JordanBasis basis = incremental_jordanize(u, 1);
    ASSERT_EQ(basis.chains.size(), 2U);
    EXPECT_EQ(basis.chains[0].vectors, (std::vector<Vector>{{q(1), q(4)}}));
    EXPECT_EQ(basis.chains[1].vectors, (std::vector<Vector>{{q(0), q(1)}}));
    expect_jordan_basis(u, basis);
}

TEST(Incremental, EqualEigenvalueWithCouplingGrowsTheChain)
{
    const ExactMatrix u{{q(1, 2), q(0)}, {q(3), q(1, 2)}};
    const JordanBasis basis = incremental_jordanize(u, 1);
    ASSERT_EQ(basis.chains.size(), 1U);
    EXPECT_EQ(basis.chains[0].vectors, (std::vector<Vector>{{q(0), q(3)}, {q(1), q(0)}}));
    EXPECT_EQ(provenance_length(basis, 0), 2U);
    expect_jordan_basis(u, basis);
}

TEST(Incremental, UncoupledRowStartsASingleton)
{
    const ExactMatrix u{{q(1, 2), q(0)}, {q(0), q(1, 2)}};
    const JordanBasis basis = incremental_jordanize(u, 1);
    ASSERT_EQ(basis.chains.size(), 2U);
    EXPECT_EQ(basis.chains[1].vectors, (std::vector<Vector>{{q(0), q(1)}}));
    EXPECT_EQ(basis.provenance.size(), 1U);

    const ExactMatrix z{{q(1, 2), q(0)}, {q(0), q(1, 3)}};
    EXPECT_EQ(incremental_jordanize(z, 1).chains.size(), 2U);
}

TEST(Incremental, EqualLengthMergeKeepsTheEarliestChain)
{
    const ExactMatrix u{{q(1, 2), q(0), q(0)}, {q(0), q(1, 2), q(0)}, {q(1), q(2), q(1, 2)}};
    const JordanBasis basis = incremental_jordanize(u, 2);
    ASSERT_EQ(basis.chains.size(), 2U);
    EXPECT_EQ(basis.chains[0].vectors, (std::vector<Vector>{{q(0), q(0), q(1)}, {q(1), q(0), q(0)}}));
    EXPECT_EQ(basis.chains[1].vectors, (std::vector<Vector>{{q(-2), q(1), q(0)}}));
    EXPECT_EQ(provenance_length(basis, 0), 2U);
    EXPECT_EQ(provenance_length(basis, 1), 1U);
    expect_jordan_basis(u, basis);
}

TEST(Incremental, LongerChainAbsorbs)
{
    // Corner J_2(1/2) + J_1(1/2); the new row couples to both eigenvectors.
    const ExactMatrix u{{q(1, 2), q(0), q(0), q(0)},
                        {q(1), q(1, 2), q(0), q(0)},
                        {q(0), q(0), q(1, 2), q(0)},
                        {q(0), q(1), q(1), q(1, 2)}};
    const JordanBasis basis = incremental_jordanize(u, 3);
    expect_jordan_basis(u, basis);
    EXPECT_EQ(provenance_length(basis, 0), 3U);
    EXPECT_EQ(provenance_length(basis, 1), 1U);
    EXPECT_TRUE(projection_invariant_holds(basis, corner_blocks(u, 3)));
}

TEST(Incremental, RejectsBadInput)
{
    EXPECT_THROW(incremental_jordanize(ExactMatrix{{q(1), q(1)}, {q(0), q(1)}}, 1), precondition_violation);
    EXPECT_THROW(incremental_jordanize(ExactMatrix{{q(1), q(0)}, {q(2), q(1)}}, 3), precondition_violation);
}

TEST(Incremental, AgreesWithTheRankOracle)
{
    Random rnd(77);
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = static_cast<std::size_t>(rnd.integer(1, 4));
        const std::size_t big_n = n + static_cast<std::size_t>(rnd.integer(0, 5));
        const ExactMatrix u = random_extension(rnd, n, big_n);
        const JordanBasis basis = incremental_jordanize(u, n);
        expect_jordan_basis(u, basis);
        const auto blocks = corner_blocks(u, n);
        EXPECT_EQ(basis.provenance.size(), blocks.size());
        EXPECT_TRUE(projection_invariant_holds(basis, blocks));
    }
}

// Operators of actual maps: the corner's own kernel is lost in projection
// only if some original block grew.
TEST(Incremental, ProjectedKernelLossImpliesGrowth)
{
    Random rnd(5150);
    int lost = 0;
    for (int t = 0; t < 120; ++t) {
        const std::size_t n = static_cast<std::size_t>(rnd.integer(1, 3));
        const PolyMap phi = rnd.triangular_map(n, {q(1, 2), q(1, 4), q(1, 8)}, 3, 3, 0.4);
        const auto p = detail::prepare(phi, std::nullopt, truncation_degree(validate_map(phi).eigenvalues));
        const JordanBasis basis = incremental_jordanize(p.op.u, n);
        expect_jordan_basis(p.op.u, basis);
        ASSERT_TRUE(projection_invariant_holds(basis, p.corner));
        const AnalysisReport report = detail::analyze_prepared(p, detail::normalized_chains(p));
        for (const auto &rec : report.records) {
            if (rec.kernel_criterion) {
                continue;
            }
            ++lost;
            bool grew = false;
            for (std::size_t j = 0; j < p.corner.size(); ++j) {
                if (p.corner[j].eigenvalue == rec.eigenvalue && provenance_length(basis, j) > p.corner[j].size) {
                    grew = true;
                }
            }
            EXPECT_TRUE(grew);
        }
    }
    EXPECT_GT(lost, 0);
}

TEST(Incremental, GainedBlockExampleStaysConsistent)
{
    const auto p = detail::prepare(testing_support::gained_block_map(), std::nullopt, 2);
    const JordanBasis basis = incremental_jordanize(p.op.u, 5);
    expect_jordan_basis(p.op.u, basis);
    EXPECT_TRUE(projection_invariant_holds(basis, p.corner));
}
