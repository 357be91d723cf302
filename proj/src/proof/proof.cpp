/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "proof/proof.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cyclomc {

std::string Sequent::str() const {
    if (rhs_kind == Rhs::NuGoal) return to_string(lhs) + " |- (nu P)(x)";
    return to_string(lhs) + " |- " + to_string(rhs_plain);
}

Certificate Certificate::safe(Formula inv, std::shared_ptr<const PartialProof> p) {
    Certificate c;
    c.kind = Kind::Safe;
    c.invariant = std::move(inv);
    c.proof = std::move(p);
    return c;
}

Certificate Certificate::unsafe(std::vector<Model> tr) {
    Certificate c;
    c.kind = Kind::Unsafe;
    c.trace = std::move(tr);
    return c;
}

Certificate Certificate::bounded(long k, std::shared_ptr<const PartialProof> p) {
    Certificate c;
    c.kind = Kind::BoundedSafe;
    c.bound = k;
    c.proof = std::move(p);
    return c;
}

Certificate Certificate::unknown(std::string why) {
    Certificate c;
    c.kind = Kind::Unknown;
    c.reason = std::move(why);
    return c;
}

const char * to_string(Certificate::Kind k) {
    switch (k) {
        case Certificate::Kind::Safe: return "SAFE";
        case Certificate::Kind::Unsafe: return "UNSAFE";
        case Certificate::Kind::BoundedSafe: return "BOUNDED_SAFE";
        case Certificate::Kind::Unknown: return "UNKNOWN";
    }
    return "?";
}

PartialProof::PartialProof(std::shared_ptr<const TransitionSystem> ts, Formula root_lhs)
    : ts_(std::move(ts)) {
    root_ = new_node(Sequent{std::move(root_lhs), Sequent::Rhs::NuGoal, nullptr}, kNoNode);
}

NodeId PartialProof::new_node(Sequent s, NodeId parent) {
    ProofNode n;
    n.sequent = std::move(s);
    n.parent = parent;
    nodes_.push_back(std::move(n));
    NodeId id = nodes_.size() - 1;
    if (parent != kNoNode) nodes_[parent].children.push_back(id);
    return id;
}

std::vector<NodeId> PartialProof::open_leaves() const {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].rule == ProofNode::Rule::Open) out.push_back(i);
    return out;
}

bool PartialProof::all_side_conditions_valid() const {
    for (auto const & n : nodes_)
        for (auto const & sc : n.side_conditions)
            if (sc.status != SideCondition::Status::Valid) return false;
    return true;
}

SideCondition PartialProof::checked(SolverSession & session, Formula lhs, Formula rhs) const {
    SideCondition sc{std::move(lhs), std::move(rhs), SideCondition::Status::Unchecked};
    EntailmentResult r = session.check_entailment(sc.lhs, sc.rhs);
    if (r.is_valid()) {
        sc.status = SideCondition::Status::Valid;
    } else if (r.is_invalid()) {
        sc.status = SideCondition::Status::Invalid;
    }
    return sc;
}

NodeId PartialProof::apply_se(SolverSession & session, NodeId leaf) {
    ProofNode & n = nodes_.at(leaf);
    if (n.rule != ProofNode::Rule::Open || n.sequent.rhs_kind != Sequent::Rhs::NuGoal) {
        throw std::invalid_argument("apply_se: not an open NuGoal leaf");
    }
    const Formula & phi = n.sequent.lhs;
    VarSet plain(ts_->state_vars().begin(), ts_->state_vars().end());
    Formula image = ts_->unprime(simplify(qe_exists(plain, mk_and(phi, ts_->trans()))));
    n.rule = ProofNode::Rule::SE;
    n.side_conditions.push_back(checked(session, phi, ts_->assertion()));
    Sequent child{image, Sequent::Rhs::NuGoal, nullptr};
    return new_node(std::move(child), leaf);
}

NodeId PartialProof::apply_se_cut(SolverSession & session, NodeId leaf, const Formula & cut) {
    ProofNode & n = nodes_.at(leaf);
    if (n.rule != ProofNode::Rule::Open || n.sequent.rhs_kind != Sequent::Rhs::NuGoal) {
        throw std::invalid_argument("apply_se_cut: not an open NuGoal leaf");
    }
    const Formula & phi = n.sequent.lhs;
    n.rule = ProofNode::Rule::SECut;
    n.cut = cut;
    std::vector<Var> plain = ts_->state_vars();
    Formula image_premise = mk_exists(plain, mk_and(phi, ts_->trans()));
    n.side_conditions.push_back(checked(session, image_premise, ts_->prime(cut)));
    n.side_conditions.push_back(checked(session, phi, ts_->assertion()));
    Sequent child{cut, Sequent::Rhs::NuGoal, nullptr};
    return new_node(std::move(child), leaf);
}

PartialProof::LinkOutcome PartialProof::try_link(SolverSession & session, NodeId leaf, bool wide_scope) {
    ProofNode & n = nodes_.at(leaf);
    if (n.rule != ProofNode::Rule::Open || n.sequent.rhs_kind != Sequent::Rhs::NuGoal) {
        throw std::invalid_argument("try_link: not an open NuGoal leaf");
    }
    std::vector<NodeId> candidates;
    for (NodeId a = n.parent; a != kNoNode; a = nodes_[a].parent) {
        if (nodes_[a].sequent.rhs_kind == Sequent::Rhs::NuGoal) candidates.push_back(a);
    }
    if (wide_scope) {
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            if (i == leaf || nodes_[i].rule == ProofNode::Rule::Open ||
                nodes_[i].rule == ProofNode::Rule::Link)
                continue;
            if (nodes_[i].sequent.rhs_kind != Sequent::Rhs::NuGoal) continue;
            if (std::find(candidates.begin(), candidates.end(), i) == candidates.end())
                candidates.push_back(i);
        }
    }
    bool saw_unknown = false;
    for (NodeId c : candidates) {
        const Formula & companion = nodes_[c].sequent.lhs;
        if (equal(n.sequent.lhs, companion)) {
            n.rule = ProofNode::Rule::Link;
            n.link_target = c;
            return LinkOutcome::Linked;
        }
        EntailmentResult r = session.check_entailment(n.sequent.lhs, companion);
        if (r.is_unknown()) {
            saw_unknown = true;
            continue;
        }
        if (r.is_valid()) {
            n.rule = ProofNode::Rule::Cut;
            n.cut = companion;
            SideCondition sc{n.sequent.lhs, companion, SideCondition::Status::Valid};
            n.side_conditions.push_back(std::move(sc));
            NodeId child = new_node(Sequent{companion, Sequent::Rhs::NuGoal, nullptr}, leaf);
            nodes_[child].rule = ProofNode::Rule::Link;
            nodes_[child].link_target = c;
            return LinkOutcome::Linked;
        }
    }
    return saw_unknown ? LinkOutcome::Unknown : LinkOutcome::NotCoverable;
}

void PartialProof::close_by_disjunction(SolverSession & session, NodeId leaf,
                                        const std::vector<NodeId> & companions) {
    ProofNode & n = nodes_.at(leaf);
    if (n.rule != ProofNode::Rule::Open) throw std::invalid_argument("close_by_disjunction: leaf not open");
    std::vector<Formula> parts{mk_false()};
    for (NodeId c : companions) parts.push_back(nodes_[c].sequent.lhs);
    Formula psi = mk_or(parts);
    n.rule = ProofNode::Rule::Cut;
    n.cut = psi;
    n.side_conditions.push_back(checked(session, n.sequent.lhs, psi));
    NodeId split = new_node(Sequent{psi, Sequent::Rhs::NuGoal, nullptr}, leaf);
    nodes_[split].rule = ProofNode::Rule::OrSplit;
    NodeId bottom = new_node(Sequent{mk_false(), Sequent::Rhs::NuGoal, nullptr}, split);
    nodes_[bottom].rule = ProofNode::Rule::Axiom;
    for (NodeId c : companions) {
        NodeId disjunct = new_node(Sequent{nodes_[c].sequent.lhs, Sequent::Rhs::NuGoal, nullptr}, split);
        nodes_[disjunct].rule = ProofNode::Rule::Link;
        nodes_[disjunct].link_target = c;
    }
}

std::vector<NodeId> PartialProof::check_global_trace() const {
    // A link is offending when some cycle through it avoids every
    // progressing node; equivalently, when its target reaches it through
    // non-progressing nodes only.
    std::vector<NodeId> offending;
    for (NodeId l = 0; l < nodes_.size(); ++l) {
        if (nodes_[l].rule != ProofNode::Rule::Link) continue;
        NodeId target = nodes_[l].link_target;
        if (nodes_[target].progressing()) continue;
        std::vector<NodeId> stack{target};
        std::vector<bool> seen(nodes_.size(), false);
        seen[target] = true;
        bool found = false;
        while (!stack.empty() && !found) {
            NodeId cur = stack.back();
            stack.pop_back();
            if (cur == l) {
                found = true;
                break;
            }
            auto push = [&](NodeId next) {
                if (next == l) {
                    found = true;
                    return;
                }
                if (!seen[next] && !nodes_[next].progressing()) {
                    seen[next] = true;
                    stack.push_back(next);
                }
            };
            for (NodeId ch : nodes_[cur].children) push(ch);
            if (nodes_[cur].rule == ProofNode::Rule::Link) push(nodes_[cur].link_target);
        }
        if (found) offending.push_back(l);
    }
    return offending;
}

Certificate PartialProof::extract_certificate(SolverSession & session) const {
    std::vector<NodeId> open = open_leaves();
    auto snapshot = std::make_shared<PartialProof>(*this);
    if (!open.empty()) {
        // Bounded shape: count progressing nodes above the deepest open leaf.
        long best = 0;
        for (NodeId leaf : open) {
            long k = 0;
            for (NodeId a = nodes_[leaf].parent; a != kNoNode; a = nodes_[a].parent)
                if (nodes_[a].progressing()) ++k;
            best = std::max(best, k);
        }
        return Certificate::bounded(best - 1, snapshot);
    }
    if (!all_side_conditions_valid()) {
        throw std::invalid_argument("extract_certificate: proof is invalid");
    }
    if (!check_global_trace().empty()) {
        throw std::invalid_argument("extract_certificate: global trace condition fails");
    }
    std::vector<Formula> parts;
    for (auto const & n : nodes_) {
        if (n.sequent.rhs_kind == Sequent::Rhs::NuGoal) parts.push_back(n.sequent.lhs);
    }
    Formula inv = simplify(mk_or(std::move(parts)));
    std::string why;
    if (!verify_safe_invariant(session, *ts_, inv, &why)) {
        throw std::logic_error("internal soundness error: extracted invariant fails re-verification: " + why);
    }
    return Certificate::safe(inv, snapshot);
}

std::string PartialProof::export_dot() const {
    std::ostringstream os;
    auto escape = [](std::string s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };
    auto rule_name = [](ProofNode::Rule r) {
        switch (r) {
            case ProofNode::Rule::Open: return "Open";
            case ProofNode::Rule::SE: return "SE";
            case ProofNode::Rule::SECut: return "SE+Cut";
            case ProofNode::Rule::Cut: return "Cut";
            case ProofNode::Rule::OrSplit: return "Or-L";
            case ProofNode::Rule::Link: return "Link";
            case ProofNode::Rule::Axiom: return "Axiom";
        }
        return "?";
    };
    os << "digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        const ProofNode & n = nodes_[i];
        std::ostringstream label;
        label << "[" << rule_name(n.rule) << "] " << n.sequent.str();
        bool invalid = false;
        for (auto const & sc : n.side_conditions) {
            const char * st = sc.status == SideCondition::Status::Valid     ? "ok"
                              : sc.status == SideCondition::Status::Invalid ? "INVALID"
                                                                            : "unchecked";
            if (sc.status == SideCondition::Status::Invalid) invalid = true;
            label << "\\n" << to_string(sc.lhs) << " |= " << to_string(sc.rhs) << " : " << st;
        }
        os << "  n" << i << " [label=\"" << escape(label.str()) << "\"";
        if (invalid) os << ", color=red";
        if (n.rule == ProofNode::Rule::Open) os << ", style=dashed";
        os << "];\n";
    }
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        for (NodeId c : nodes_[i].children) os << "  n" << i << " -> n" << c << ";\n";
        if (nodes_[i].rule == ProofNode::Rule::Link) {
            os << "  n" << i << " -> n" << nodes_[i].link_target << " [style=dashed, constraint=false];\n";
        }
    }
    os << "}\n";
    return os.str();
}

void PartialProof::validate_side_conditions(SolverSession & session) {
    for (auto & n : nodes_) {
        for (auto & sc : n.side_conditions) {
            if (sc.status != SideCondition::Status::Unchecked) continue;
            EntailmentResult r = session.check_entailment(sc.lhs, sc.rhs);
            if (r.is_valid()) {
                sc.status = SideCondition::Status::Valid;
            } else if (r.is_invalid()) {
                sc.status = SideCondition::Status::Invalid;
            }
        }
    }
}

PartialProof PartialProof::from_cut_sequence(std::shared_ptr<const TransitionSystem> ts,
                                             const CutSequence & seq) {
    if (seq.phis.empty()) throw std::invalid_argument("from_cut_sequence: empty sequence");
    PartialProof p(ts, seq.phis[0]);
    NodeId cur = p.root_;
    for (size_t i = 1; i < seq.phis.size(); ++i) {
        ProofNode & n = p.nodes_[cur];
        n.rule = ProofNode::Rule::SECut;
        n.cut = seq.phis[i];
        std::vector<Var> plain = ts->state_vars();
        n.side_conditions.push_back(SideCondition{
            mk_exists(plain, mk_and(n.sequent.lhs, ts->trans())), ts->prime(seq.phis[i]),
            SideCondition::Status::Unchecked});
        n.side_conditions.push_back(
            SideCondition{n.sequent.lhs, ts->assertion(), SideCondition::Status::Unchecked});
        cur = p.new_node(Sequent{seq.phis[i], Sequent::Rhs::NuGoal, nullptr}, cur);
    }
    return p;
}

std::optional<CutSequence> PartialProof::to_cut_sequence() const {
    CutSequence seq;
    NodeId cur = root_;
    while (true) {
        const ProofNode & n = nodes_[cur];
        if (n.sequent.rhs_kind != Sequent::Rhs::NuGoal) return std::nullopt;
        seq.phis.push_back(n.sequent.lhs);
        if (n.rule == ProofNode::Rule::Open) return seq;
        if (n.rule != ProofNode::Rule::SECut || n.children.size() != 1) return std::nullopt;
        cur = n.children[0];
    }
}

bool check_input_condition(SolverSession & session, const TransitionSystem & ts,
                           const std::vector<Formula> & phis, std::string * why) {
    auto fail = [&why](const std::string & msg) {
        if (why) *why = msg;
        return false;
    };
    if (phis.empty()) return fail("empty cut sequence");
    if (!session.check_entailment(phis[0], ts.init()).is_valid() ||
        !session.check_entailment(ts.init(), phis[0]).is_valid()) {
        return fail("phi_0 differs from init");
    }
    for (size_t i = 0; i + 1 < phis.size(); ++i) {
        if (!session.check_entailment(phis[i], ts.assertion()).is_valid()) {
            return fail("phi_" + std::to_string(i) + " does not entail the assertion");
        }
        if (!session.check_entailment(mk_and(phis[i], ts.trans()), ts.prime(phis[i + 1])).is_valid()) {
            return fail("post(phi_" + std::to_string(i) + ") does not entail phi_" + std::to_string(i + 1));
        }
    }
    return true;
}

bool check_refinement(SolverSession & session, const TransitionSystem & ts,
                      const std::vector<Formula> & original, const std::vector<Formula> & refined,
                      std::string * why) {
    auto fail = [&why](const std::string & msg) {
        if (why) *why = msg;
        return false;
    };
    if (original.size() != refined.size()) return fail("length mismatch");
    if (refined.empty()) return fail("empty refinement");
    if (!session.check_entailment(refined[0], ts.init()).is_valid() ||
        !session.check_entailment(ts.init(), refined[0]).is_valid()) {
        return fail("phi'_0 differs from init");
    }
    for (size_t i = 0; i < refined.size(); ++i) {
        if (!session.check_entailment(refined[i], original[i]).is_valid()) {
            return fail("phi'_" + std::to_string(i) + " does not strengthen phi_" + std::to_string(i));
        }
    }
    for (size_t i = 0; i + 1 < refined.size(); ++i) {
        if (!session.check_entailment(mk_and(refined[i], ts.trans()), ts.prime(refined[i + 1])).is_valid()) {
            return fail("post(phi'_" + std::to_string(i) + ") does not entail phi'_" +
                        std::to_string(i + 1));
        }
    }
    if (!session.check_entailment(refined.back(), ts.assertion()).is_valid()) {
        return fail("phi'_n does not entail the assertion");
    }
    return true;
}

bool verify_safe_invariant(SolverSession & session, const TransitionSystem & ts, const Formula & inv,
                           std::string * why) {
    auto fail = [&why](const std::string & msg) {
        if (why) *why = msg;
        return false;
    };
    if (!session.check_entailment(ts.init(), inv).is_valid()) return fail("init does not entail invariant");
    if (!session.check_entailment(mk_and(inv, ts.trans()), ts.prime(inv)).is_valid()) {
        return fail("invariant is not inductive");
    }
    if (!session.check_entailment(inv, ts.assertion()).is_valid()) {
        return fail("invariant does not entail the assertion");
    }
    return true;
}

bool replay_trace(const TransitionSystem & ts, const std::vector<Model> & trace) {
    if (trace.empty()) return false;
    if (!evaluate(ts.init(), trace.front())) return false;
    for (size_t i = 0; i + 1 < trace.size(); ++i) {
        Model combined = trace[i];
        for (size_t v = 0; v < ts.state_vars().size(); ++v) {
            combined.set(ts.primed_vars()[v], trace[i + 1].at(ts.state_vars()[v]));
        }
        if (!evaluate(ts.trans(), combined)) return false;
    }
    return evaluate(mk_not(ts.assertion()), trace.back());
}

bool verify_certificate(SolverSession & session, const TransitionSystem & ts, const Certificate & cert,
                        std::string * why) {
    switch (cert.kind) {
        case Certificate::Kind::Safe: return verify_safe_invariant(session, ts, cert.invariant, why);
        case Certificate::Kind::Unsafe:
            if (replay_trace(ts, cert.trace)) return true;
            if (why) *why = "unsafe trace does not replay";
            return false;
        case Certificate::Kind::BoundedSafe:
        case Certificate::Kind::Unknown: return true;
    }
    return false;
}

} // namespace cyclomc
