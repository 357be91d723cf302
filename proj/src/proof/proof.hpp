/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_PROOF_PROOF_HPP
#define CYCLOMC_PROOF_PROOF_HPP

#include "backend/session.hpp"
#include "logic/formula.hpp"
#include "logic/model.hpp"
#include "logic/transition_system.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cyclomc {

using NodeId = size_t;
constexpr NodeId kNoNode = std::numeric_limits<size_t>::max();

/// lhs |- rhs where rhs is either the fixed coinductive goal (nu P)(x) or a
/// plain formula (used for completeness of the data model).
struct Sequent {
    Formula lhs;
    enum class Rhs { NuGoal, Plain } rhs_kind = Rhs::NuGoal;
    Formula rhs_plain; // Rhs::Plain only

    std::string str() const;
};

struct SideCondition {
    Formula lhs;
    Formula rhs;
    enum class Status { Unchecked, Valid, Invalid } status = Status::Unchecked;
};

struct ProofNode {
    /// SE and SECut are the progressing rules (both derive from (nu-R));
    /// Cut, OrSplit and Link are non-progressing. Axiom closes a bottom
    /// sequent; Open marks an unproved leaf.
    enum class Rule { Open, SE, SECut, Cut, OrSplit, Link, Axiom };

    Sequent sequent;
    Rule rule = Rule::Open;
    Formula cut;                  // SECut: cut formula; Cut: lemma
    NodeId link_target = kNoNode; // Link
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    std::vector<SideCondition> side_conditions;

    bool progressing() const { return rule == Rule::SE || rule == Rule::SECut; }
};

/// The sequential representation phi_0 ... phi_n of an IMPACT/PDR-style
/// partial proof (a chain of SECut nodes with an open top).
struct CutSequence {
    std::vector<Formula> phis;

    size_t depth() const { return phis.empty() ? 0 : phis.size() - 1; }
};

struct Certificate {
    enum class Kind { Safe, Unsafe, BoundedSafe, Unknown };
    Kind kind = Kind::Unknown;
    Formula invariant;            // Safe
    std::vector<Model> trace;     // Unsafe: models over the state variables
    long bound = -1;              // BoundedSafe
    std::string reason;           // Unknown
    std::shared_ptr<const class PartialProof> proof;

    static Certificate safe(Formula inv, std::shared_ptr<const PartialProof> p = nullptr);
    static Certificate unsafe(std::vector<Model> tr);
    static Certificate bounded(long k, std::shared_ptr<const PartialProof> p = nullptr);
    static Certificate unknown(std::string why);
};

const char * to_string(Certificate::Kind k);

/// Tree-shaped proof arena with Link back-edges; single-owner mutable
/// during search, copyable for snapshots.
class PartialProof {
public:
    PartialProof(std::shared_ptr<const TransitionSystem> ts, Formula root_lhs);

    const TransitionSystem & system() const { return *ts_; }
    NodeId root() const { return root_; }
    const ProofNode & node(NodeId id) const { return nodes_.at(id); }
    size_t size() const { return nodes_.size(); }

    std::vector<NodeId> open_leaves() const;
    bool closed() const { return open_leaves().empty(); }
    bool all_side_conditions_valid() const;

    /// (SE): expands an open NuGoal leaf with the exact one-step image;
    /// records and checks the side condition lhs |= assertion. Returns the
    /// new open child.
    NodeId apply_se(SolverSession & session, NodeId leaf);

    /// (SE+Cut): expands with the given cut formula; records both side
    /// conditions with their checked status. Returns the new open child.
    NodeId apply_se_cut(SolverSession & session, NodeId leaf, const Formula & cut);

    enum class LinkOutcome { Linked, NotCoverable, Unknown };

    /// Covers an open leaf by an existing companion: a direct Link on
    /// syntactic equality, otherwise (Cut) with the companion's formula as
    /// lemma and a Link child. Companions default to proper ancestors;
    /// wide_scope admits every expanded NuGoal node.
    LinkOutcome try_link(SolverSession & session, NodeId leaf, bool wide_scope = false);

    /// Closes an open leaf by the forward-criterion construction: a (Cut)
    /// to the disjunction of companion formulas, an (OrSplit) child, links
    /// for each disjunct and a bottom axiom for the remainder. The caller
    /// guarantees lhs |= disjunction (checked and recorded).
    void close_by_disjunction(SolverSession & session, NodeId leaf, const std::vector<NodeId> & companions);

    /// Every Link whose cycle avoids progressing nodes; empty means the
    /// global trace condition holds.
    std::vector<NodeId> check_global_trace() const;

    /// Safe certificate from a closed valid proof (invariant = disjunction
    /// of NuGoal left-hand sides, re-verified through the backend), or
    /// BoundedSafe from an open SE/SECut chain.
    Certificate extract_certificate(SolverSession & session) const;

    /// GraphViz rendering with rule labels, side-condition status and
    /// dashed back-edges for links.
    std::string export_dot() const;

    /// Checks every Unchecked side condition through the session.
    void validate_side_conditions(SolverSession & session);

    /// Chain embedding of a cut sequence (root phi_0, SECut per phi_i, open
    /// top). Side conditions are recorded unchecked.
    static PartialProof from_cut_sequence(std::shared_ptr<const TransitionSystem> ts,
                                          const CutSequence & seq);

    /// Lossless projection back when the proof is such a chain.
    std::optional<CutSequence> to_cut_sequence() const;

private:
    NodeId new_node(Sequent s, NodeId parent);
    SideCondition checked(SolverSession & session, Formula lhs, Formula rhs) const;

    std::shared_ptr<const TransitionSystem> ts_;
    std::vector<ProofNode> nodes_;
    NodeId root_;
};

/// phi_0 equivalent to init; phi_i |= assert and post(phi_i) |= phi_{i+1}
/// for i < n. Returns false with a reason on the first violation.
bool check_input_condition(SolverSession & session, const TransitionSystem & ts,
                           const std::vector<Formula> & phis, std::string * why = nullptr);

/// The refinement constraints: phi'_0 = init, phi'_i |= phi_i,
/// post(phi'_i) |= phi'_{i+1}, phi'_n |= assert.
bool check_refinement(SolverSession & session, const TransitionSystem & ts,
                      const std::vector<Formula> & original, const std::vector<Formula> & refined,
                      std::string * why = nullptr);

/// The three Safe-certificate clauses through the backend.
bool verify_safe_invariant(SolverSession & session, const TransitionSystem & ts, const Formula & inv,
                           std::string * why = nullptr);

/// init(m0), trans(m_i, m_{i+1}), not assert(m_last), all under evaluate.
bool replay_trace(const TransitionSystem & ts, const std::vector<Model> & trace);

/// Re-validates any certificate against its system.
bool verify_certificate(SolverSession & session, const TransitionSystem & ts, const Certificate & cert,
                        std::string * why = nullptr);

} // namespace cyclomc

#endif
