#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqlforge/ast.hpp"
#include "sqlforge/parse.hpp"
#include "sqlforge/render.hpp"
#include "sqlforge/util.hpp"

namespace sqlforge {

struct NoCommonClause : std::runtime_error {
    explicit NoCommonClause(const std::string& clause)
        : std::runtime_error("clause " + clause + " absent from a parent template") {}
};

struct InvalidOffspring : std::runtime_error {
    explicit InvalidOffspring(const std::string& why)
        : std::runtime_error("crossover offspring does not re-parse: " + why) {}
};

struct ArityMismatch : std::runtime_error {
    ArityMismatch(size_t expected, size_t got)
        : std::runtime_error("template has " + std::to_string(expected) +
                             " placeholders, got " + std::to_string(got) + " bindings") {}
};

struct TypeMismatch : std::runtime_error {
    int ordinal;
    TypeMismatch(int ordinal_, FillType expected, const std::string& value)
        : std::runtime_error("binding \"" + value + "\" is not valid for " +
                             fill_type_name(expected) + " at ordinal " +
                             std::to_string(ordinal_)),
          ordinal(ordinal_) {}
};

// An AST skeleton with typed placeholders in place of identifiers and
// literals; the syntactic constraint carried through SQL generation.
struct Template {
    enum class Origin { Seed, Crossover };

    Node skeleton;
    std::string id;  // content hash of the rendered skeleton
    Origin origin = Origin::Seed;
    std::vector<std::string> parent_ids;

    std::string rendered() const { return render_node(skeleton); }
};

namespace detail {

// Alias names defined by the FROM/JOIN clauses of one statement node.
inline std::set<std::string> collect_alias_defs(const Node& stmt) {
    std::set<std::string> aliases;
    auto scan_object = [&](const Node& object) {
        if (object.kind != NodeKind::Expression || object.children.size() < 2) return;
        const Node& last = object.children.back();
        const bool has_as = object.children.size() == 3 &&
                            object.children[1].kind == NodeKind::Keyword &&
                            object.children[1].label == "AS";
        const bool bare = object.children.size() == 2;
        if ((has_as || bare) && last.children.empty() &&
            (last.kind == NodeKind::Identifier || last.kind == NodeKind::Placeholder)) {
            aliases.insert(last.label);
        }
    };
    for (const Node& clause : stmt.children) {
        if (clause.kind != NodeKind::Clause) continue;
        if (clause.label == "FROM") {
            for (const Node& child : clause.children) {
                if (child.kind == NodeKind::Keyword) continue;
                if (child.children.empty() && child.token_class == TokenClass::Punctuation) continue;
                scan_object(child);
            }
        } else if (clause.label == "JOIN") {
            for (const Node& child : clause.children) {
                if (child.kind == NodeKind::Keyword) {
                    if (child.label == "ON") break;
                    continue;
                }
                scan_object(child);
            }
        }
    }
    return aliases;
}

class Templatizer {
public:
    Node run(const Node& root, std::vector<std::string>* bindings_out) {
        bindings_ = bindings_out;
        Node out = root;
        transform_statement(out);
        assign_placeholder_ordinals(out);
        return out;
    }

private:
    std::vector<std::set<std::string>> scopes_;
    std::vector<std::string>* bindings_ = nullptr;

    bool alias_defined(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (it->count(name)) return true;
        }
        return false;
    }

    void record(const std::string& original) {
        if (bindings_) bindings_->push_back(original);
    }

    void to_placeholder(Node& leaf, FillType type) {
        std::string original = leaf.label;
        if (type == FillType::STR_VALUE) {
            // strip quotes, undo '' escaping
            original = original.substr(1, original.size() - 2);
            std::string unescaped;
            for (size_t i = 0; i < original.size(); ++i) {
                unescaped.push_back(original[i]);
                if (original[i] == '\'' && i + 1 < original.size() && original[i + 1] == '\'') ++i;
            }
            original = unescaped;
        }
        record(original);
        leaf = Node::placeholder(type, -1);
    }

    void transform_statement(Node& stmt) {
        if (stmt.label == "COMPOUND") {
            for (Node& child : stmt.children) {
                if (child.kind == NodeKind::Statement) transform_statement(child);
            }
            return;
        }
        scopes_.push_back(collect_alias_defs(stmt));
        for (Node& clause : stmt.children) {
            if (clause.kind != NodeKind::Clause) continue;
            if (clause.label == "FROM") {
                for (Node& child : clause.children) {
                    if (child.kind == NodeKind::Keyword) continue;
                    if (child.children.empty() && child.token_class == TokenClass::Punctuation) continue;
                    transform_table_object(child);
                }
            } else if (clause.label == "JOIN") {
                bool after_on = false;
                for (Node& child : clause.children) {
                    if (child.kind == NodeKind::Keyword) {
                        if (child.label == "ON") after_on = true;
                        continue;
                    }
                    if (after_on) {
                        transform_expr(child);
                    } else {
                        transform_table_object(child);
                    }
                }
            } else {
                for (Node& child : clause.children) transform_expr(child);
            }
        }
        scopes_.pop_back();
    }

    void transform_table_object(Node& object) {
        if (object.children.empty()) {
            if (object.kind == NodeKind::Identifier &&
                object.token_class == TokenClass::Identifier) {
                to_placeholder(object, FillType::TABLE);
            }
            return;
        }
        if (is_subquery(object)) {
            transform_statement(object.children[1]);
            return;
        }
        // alias wrapper: [base, AS, alias] or [base, alias]
        Node& last = object.children.back();
        transform_table_object(object.children.front());
        if (last.children.empty() && last.kind == NodeKind::Identifier) {
            to_placeholder(last, FillType::ALIAS);
        }
    }

    static bool is_subquery(const Node& n) {
        return n.kind == NodeKind::Expression && n.children.size() == 3 &&
               n.children[0].label == "(" && n.children[1].kind == NodeKind::Statement &&
               n.children[2].label == ")";
    }

    static bool is_qualified_ref(const Node& n) {
        return n.kind == NodeKind::Expression && n.children.size() == 3 &&
               n.children[1].children.empty() && n.children[1].label == "." &&
               n.children[0].children.empty();
    }

    static bool is_alias_wrapper(const Node& n) {
        return n.kind == NodeKind::Expression && n.children.size() == 3 &&
               n.children[1].kind == NodeKind::Keyword && n.children[1].label == "AS" &&
               n.children[2].children.empty() &&
               n.children[2].kind == NodeKind::Identifier;
    }

    void transform_expr(Node& node) {
        if (node.children.empty()) {
            switch (node.token_class) {
                case TokenClass::Identifier:
                    to_placeholder(node, FillType::COLUMN);
                    break;
                case TokenClass::NumericLiteral:
                    to_placeholder(node, FillType::NUM_VALUE);
                    break;
                case TokenClass::StringLiteral:
                    to_placeholder(node, FillType::STR_VALUE);
                    break;
                default:
                    break;  // keywords, operators, punctuation, star stay
            }
            return;
        }
        if (node.kind == NodeKind::Statement) {
            transform_statement(node);
            return;
        }
        if (is_qualified_ref(node)) {
            Node& qualifier = node.children[0];
            Node& member = node.children[2];
            if (qualifier.kind == NodeKind::Identifier &&
                qualifier.token_class == TokenClass::Identifier) {
                to_placeholder(qualifier,
                               alias_defined(qualifier.label) ? FillType::ALIAS : FillType::TABLE);
            }
            if (member.kind == NodeKind::Identifier &&
                member.token_class == TokenClass::Identifier) {
                to_placeholder(member, FillType::COLUMN);
            }
            return;
        }
        if (is_alias_wrapper(node)) {
            transform_expr(node.children[0]);
            to_placeholder(node.children[2], FillType::ALIAS);
            return;
        }
        for (Node& child : node.children) transform_expr(child);
    }
};

inline std::string strip_utility_marker(const Node&);  // not defined; placeholder guard

}  // namespace detail

// Replaces every identifier and literal leaf with a typed placeholder.
// Keywords, operators, punctuation, star and function names survive.
inline Template templatize(const SqlAst& ast) {
    detail::Templatizer tz;
    Template t;
    t.skeleton = tz.run(ast.root, nullptr);
    t.id = fnv1a64_hex(render_node(t.skeleton));
    t.origin = Template::Origin::Seed;
    return t;
}

// templatize plus the original leaf values in placeholder order; string
// literal values come back unquoted.
inline std::pair<Template, std::vector<std::string>> templatize_extract(const SqlAst& ast) {
    detail::Templatizer tz;
    std::vector<std::string> bindings;
    Template t;
    t.skeleton = tz.run(ast.root, &bindings);
    t.id = fnv1a64_hex(render_node(t.skeleton));
    t.origin = Template::Origin::Seed;
    return {std::move(t), std::move(bindings)};
}

// Parses rendered template text back into a Template value.
inline Template template_from_text(const std::string& text) {
    Template t;
    t.skeleton = parse_template_text(text);
    t.id = fnv1a64_hex(render_node(t.skeleton));
    return t;
}

inline size_t placeholder_count(const Template& t) {
    size_t count = 0;
    walk(t.skeleton, [&](const Node& n) {
        if (n.kind == NodeKind::Placeholder) ++count;
    });
    return count;
}

// True iff the statement's templatization equals the skeleton node for
// node, fill types included. The acceptance gate for generated SQL.
inline bool matches_template(const SqlAst& sql, const Template& t) {
    return equal_tree(templatize(sql).skeleton, t.skeleton);
}

namespace detail {

inline bool valid_identifier(const std::string& v) {
    if (v.empty() || !is_ident_start(v[0])) return false;
    for (char c : v) {
        if (!is_ident_char(c)) return false;
    }
    return reserved_keywords().count(to_upper(v)) == 0;
}

inline bool valid_number(const std::string& v) {
    if (v.empty()) return false;
    size_t i = 0;
    while (i < v.size() && is_digit(v[i])) ++i;
    if (i == 0) return false;
    if (i < v.size() && v[i] == '.') {
        ++i;
        const size_t frac_start = i;
        while (i < v.size() && is_digit(v[i])) ++i;
        if (i == frac_start) return false;
    }
    return i == v.size();
}

inline std::string quote_string_literal(const std::string& v) {
    std::string out = "'";
    for (char c : v) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
}

}  // namespace detail

// Substitutes bindings into the skeleton in ordinal (pre-order) order.
inline SqlAst fill_template(const Template& t, const std::vector<std::string>& bindings) {
    const size_t n = placeholder_count(t);
    if (bindings.size() != n) throw ArityMismatch(n, bindings.size());

    Node root = t.skeleton;
    int next = 0;
    walk_mut(root, [&](Node& node) {
        if (node.kind != NodeKind::Placeholder) return;
        const int ordinal = next++;
        const std::string& value = bindings[static_cast<size_t>(ordinal)];
        switch (node.fill_type) {
            case FillType::TABLE:
            case FillType::COLUMN:
            case FillType::ALIAS:
                if (!detail::valid_identifier(value))
                    throw TypeMismatch(ordinal, node.fill_type, value);
                node = Node::leaf(NodeKind::Identifier, TokenClass::Identifier, value);
                break;
            case FillType::NUM_VALUE:
                if (!detail::valid_number(value))
                    throw TypeMismatch(ordinal, node.fill_type, value);
                node = Node::leaf(NodeKind::Literal, TokenClass::NumericLiteral, value);
                break;
            case FillType::STR_VALUE:
                node = Node::leaf(NodeKind::Literal, TokenClass::StringLiteral,
                                  detail::quote_string_literal(value));
                break;
        }
    });
    return SqlAst{std::move(root)};
}

// Clause-level subtree exchange: the returned template is `a` with its
// clause_kind subtree replaced by b's. Offspring must re-parse.
inline Template crossover(const Template& a, const Template& b, const std::string& clause_kind,
                          uint64_t seed) {
    auto clause_indices = [&](const Template& t) {
        std::vector<size_t> found;
        if (t.skeleton.kind == NodeKind::Statement && t.skeleton.label == "SELECT") {
            for (size_t i = 0; i < t.skeleton.children.size(); ++i) {
                const Node& c = t.skeleton.children[i];
                if (c.kind == NodeKind::Clause && c.label == clause_kind) found.push_back(i);
            }
        }
        return found;
    };
    const auto in_a = clause_indices(a);
    const auto in_b = clause_indices(b);
    if (in_a.empty() || in_b.empty()) throw NoCommonClause(clause_kind);

    SeededRng rng(seed);
    const size_t slot_a = in_a[rng.next_below(in_a.size())];
    const size_t slot_b = in_b[rng.next_below(in_b.size())];

    Node spliced = a.skeleton;
    spliced.children[slot_a] = b.skeleton.children[slot_b];

    Template offspring;
    try {
        offspring.skeleton = parse_template_text(render_node(spliced));
    } catch (const ParseError& e) {
        throw InvalidOffspring(e.what());
    }
    offspring.id = fnv1a64_hex(render_node(offspring.skeleton));
    offspring.origin = Template::Origin::Crossover;
    offspring.parent_ids = {a.id, b.id};
    return offspring;
}

// Template invariant check used by tests and pool enrichment.
inline bool template_is_wellformed(const Template& t, std::string* why = nullptr) {
    bool ok = true;
    walk(t.skeleton, [&](const Node& n) {
        if (!n.children.empty()) return;
        if (n.token_class == TokenClass::Identifier || n.token_class == TokenClass::NumericLiteral ||
            n.token_class == TokenClass::StringLiteral) {
            ok = false;
            if (why) *why = "identifier or literal leaf in skeleton: " + n.label;
        }
    });
    if (!ok) return false;
    try {
        Node reparsed = parse_template_text(render_node(t.skeleton));
        if (!equal_tree(reparsed, t.skeleton)) {
            if (why) *why = "rendered text does not re-parse to an equal skeleton";
            return false;
        }
    } catch (const ParseError& e) {
        if (why) *why = e.what();
        return false;
    }
    if (t.id != fnv1a64_hex(render_node(t.skeleton))) {
        if (why) *why = "id is not the content hash of the rendered skeleton";
        return false;
    }
    return true;
}

// Structurally deduplicated template collection; insertion order kept.
class TemplatePool {
public:
    bool insert(Template t) {
        if (ids_.count(t.id)) return false;
        ids_.insert(t.id);
        templates_.push_back(std::move(t));
        return true;
    }

    bool contains(const std::string& id) const { return ids_.count(id) != 0; }
    size_t size() const { return templates_.size(); }
    bool empty() const { return templates_.empty(); }
    const Template& at(size_t i) const { return templates_.at(i); }
    const std::vector<Template>& all() const { return templates_; }

    const Template* find(const std::string& id) const {
        for (const auto& t : templates_) {
            if (t.id == id) return &t;
        }
        return nullptr;
    }

private:
    std::vector<Template> templates_;
    std::set<std::string> ids_;
};

struct EnrichStats {
    size_t attempts = 0;
    size_t added = 0;
    size_t discarded_invalid = 0;
    size_t discarded_no_common_clause = 0;
    size_t discarded_duplicate = 0;
};

inline const std::vector<std::string>& crossover_clause_kinds() {
    static const std::vector<std::string> kinds = {"WHERE", "GROUP BY", "HAVING", "ORDER BY",
                                                   "LIMIT"};
    return kinds;
}

// Enriches the pool by random crossover until it reaches multiplier x
// its current size (or the attempt budget runs out). Deterministic for
// a fixed seed; invalid offspring are discarded and counted.
inline EnrichStats enrich_pool(TemplatePool& pool, double multiplier, uint64_t seed) {
    EnrichStats stats;
    if (pool.empty()) return stats;
    const size_t initial = pool.size();
    const size_t target = static_cast<size_t>(static_cast<double>(initial) * multiplier + 0.5);
    const size_t max_attempts = 200 * (target > initial ? target - initial : 0) + 100;

    SeededRng rng(seed);
    while (pool.size() < target && stats.attempts < max_attempts) {
        ++stats.attempts;
        const Template& a = pool.at(rng.next_below(pool.size()));
        const Template& b = pool.at(rng.next_below(pool.size()));
        const std::string& kind =
            crossover_clause_kinds()[rng.next_below(crossover_clause_kinds().size())];
        try {
            Template child = crossover(a, b, kind, rng.next());
            if (!template_is_wellformed(child)) {
                ++stats.discarded_invalid;
                continue;
            }
            if (pool.insert(std::move(child))) {
                ++stats.added;
            } else {
                ++stats.discarded_duplicate;
            }
        } catch (const NoCommonClause&) {
            ++stats.discarded_no_common_clause;
        } catch (const InvalidOffspring&) {
            ++stats.discarded_invalid;
        }
    }
    return stats;
}

}  // namespace sqlforge
