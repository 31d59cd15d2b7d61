#include <gtest/gtest.h>

#include "support.hpp"

using namespace sdnrm;
using sdnrm::testing::Rng;

TEST(CreateContractPair, StrongActiveOnCreation) {
    const auto p = create_contract_pair(0, 5, milliseconds(5), milliseconds(10));
    EXPECT_TRUE(p.strong.active);
    EXPECT_FALSE(p.weak.active);
    EXPECT_EQ(p.active().ped, milliseconds(5));
    EXPECT_EQ(p.strong.kind, ContractKind::Strong);
    EXPECT_EQ(p.weak.kind, ContractKind::Weak);
    EXPECT_EQ(p.strong.assumptions, default_assumptions());
}

TEST(CreateContractPair, DegenerateWeakAllowed) {
    const auto p = create_contract_pair(0, 1, milliseconds(5), milliseconds(5));
    EXPECT_EQ(p.weak.ped, p.strong.ped);
}

TEST(CreateContractPair, WeakBelowStrongRejected) {
    EXPECT_THROW(create_contract_pair(0, 1, milliseconds(5), milliseconds(3)), ModelError);
    EXPECT_THROW(create_contract_pair(0, 1, Time::zero(), milliseconds(3)), ModelError);
}

TEST(Observe, LessOrEqualIsSatisfied) {
    const auto p = create_contract_pair(0, 1, milliseconds(5), milliseconds(10));
    EXPECT_EQ(observe(p.strong, milliseconds(3), seconds(1), FaultCause::EstimationCycle), std::nullopt);
    EXPECT_EQ(observe(p.strong, milliseconds(5), seconds(1), FaultCause::EstimationCycle), std::nullopt);
    const auto f = observe(p.strong, milliseconds(6), seconds(1), FaultCause::LinkFailureEvent);
    ASSERT_TRUE(f);
    EXPECT_EQ(f->observed_ed, milliseconds(6));
    EXPECT_EQ(f->ped, milliseconds(5));
    EXPECT_EQ(f->detected_at, seconds(1));
    EXPECT_EQ(f->cause, FaultCause::LinkFailureEvent);
}

TEST(Observe, BrokenPathIsAFault) {
    const auto p = create_contract_pair(0, 1, milliseconds(5), milliseconds(10));
    const auto f = observe(p.strong, std::nullopt, seconds(2), FaultCause::EstimationCycle);
    ASSERT_TRUE(f);
    EXPECT_EQ(f->observed_ed, Time::max());
}

TEST(Observe, MonotoneInEd) {
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        const auto p = create_contract_pair(0, 1, Time{rng.between(1, 10'000'000)}, Time{20'000'000});
        const Time e1{rng.between(0, 20'000'000)};
        const Time e2{rng.between(0, e1.ns())};
        if (!observe(p.strong, e1, {}, FaultCause::EstimationCycle)) {
            EXPECT_FALSE(observe(p.strong, e2, {}, FaultCause::EstimationCycle));
        }
        // anything meeting strong meets weak
        if (!observe(p.strong, e1, {}, FaultCause::EstimationCycle)) {
            EXPECT_FALSE(observe(p.weak, e1, {}, FaultCause::EstimationCycle));
        }
    }
}

TEST(ModifyContract, TighteningEmitsEvent) {
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(10)));
    const auto ev = store.modify_contract(contract_id(0, ContractKind::Strong), milliseconds(2), seconds(60));
    ASSERT_TRUE(ev);
    EXPECT_EQ(ev->old_ped, milliseconds(5));
    EXPECT_EQ(ev->new_ped, milliseconds(2));
    EXPECT_EQ(ev->at, seconds(60));
    EXPECT_EQ(store.pair(0).strong.ped, milliseconds(2));
    EXPECT_EQ(store.pair(0).weak.ped, milliseconds(10));
}

TEST(ModifyContract, UnchangedIsNoOp) {
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(10)));
    EXPECT_EQ(store.modify_contract(0, milliseconds(5), seconds(1)), std::nullopt);
}

TEST(ModifyContract, StrongAboveWeakRaisesWeakProportionally) {
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(6)));
    ASSERT_TRUE(store.modify_contract(contract_id(0, ContractKind::Strong), milliseconds(10), seconds(1)));
    EXPECT_EQ(store.pair(0).strong.ped, milliseconds(10));
    EXPECT_EQ(store.pair(0).weak.ped, milliseconds(12));
}

TEST(ModifyContract, WeakBelowStrongLowersStrong) {
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(10)));
    ASSERT_TRUE(store.modify_contract(contract_id(0, ContractKind::Weak), milliseconds(4), seconds(1)));
    EXPECT_EQ(store.pair(0).weak.ped, milliseconds(4));
    EXPECT_EQ(store.pair(0).strong.ped, milliseconds(2));
}

TEST(ModifyContract, Errors) {
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(10)));
    EXPECT_THROW(store.modify_contract(contract_id(3, ContractKind::Strong), milliseconds(1), {}), ModelError);
    EXPECT_THROW(store.modify_contract(0, Time::zero(), {}), ModelError);
}

TEST(ModifyContract, PairInvariantSurvivesRandomEdits) {
    Rng rng(8);
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(10)));
    for (int i = 0; i < 5000; ++i) {
        const ContractId c = contract_id(0, rng.chance(50) ? ContractKind::Strong : ContractKind::Weak);
        store.modify_contract(c, Time{rng.between(1, 50'000'000)}, Time{i});
        if (rng.chance(30)) store.switch_active(0, rng.chance(50) ? ContractKind::Strong : ContractKind::Weak);
        const auto& p = store.pair(0);
        ASSERT_GE(p.weak.ped, p.strong.ped);
        ASSERT_GT(p.strong.ped, Time::zero());
        ASSERT_NE(p.strong.active, p.weak.active);
    }
}

TEST(SwitchActive, FlipsAndNoOps) {
    ContractStore store;
    store.add(create_contract_pair(0, 1, milliseconds(5), milliseconds(10)));
    EXPECT_TRUE(store.switch_active(0, ContractKind::Weak));
    EXPECT_EQ(store.pair(0).active().ped, milliseconds(10));
    EXPECT_FALSE(store.switch_active(0, ContractKind::Weak));
    EXPECT_TRUE(store.switch_active(0, ContractKind::Strong));
    EXPECT_EQ(store.pair(0).active_kind(), ContractKind::Strong);
}

TEST(ContractIds, EncodePairAndKind) {
    EXPECT_EQ(contract_id(3, ContractKind::Weak), 7u);
    EXPECT_EQ(pair_of(7), 3u);
    EXPECT_EQ(kind_of(7), ContractKind::Weak);
    EXPECT_EQ(kind_of(6), ContractKind::Strong);
}
