#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "copl/ast.hpp"
#include "copl/format.hpp"
#include "copl/model.hpp"
#include "copl/source.hpp"
#include "copl/store.hpp"
#include "copl/trace.hpp"
#include "copl/value.hpp"

namespace copl {

struct RunOptions {
    bool trace = false;
    int maxDepth = 10000;
};

struct ExecutionOutcome {
    std::string output;
    std::vector<TraceEvent> trace;
    bool ok = true;
    ErrorKind errorKind = ErrorKind::ArityOrTypeError;
    std::string errorMessage;
    Pos errorPos;
};

enum class FrameKind { Incoming, Outgoing, Getter, Setter };

// One executing method or accessor body: the full dynamic receiver, the
// index of the concept the body belongs to, and the body's locals' home.
struct Frame {
    Reference ref;
    std::size_t level = 0;
    FrameKind kind = FrameKind::Incoming;
    Value setterValue;
};

enum class PropertyMode { Get, Set };

namespace detail {

struct DepthGuard {
    int& depth;
    DepthGuard(int& d, int max, Pos pos) : depth(d) {
        if (++depth > max) {
            --depth;
            throw Error(ErrorKind::DepthExceeded, pos,
                        "dispatch depth limit exceeded (" + std::to_string(max) + ")");
        }
    }
    ~DepthGuard() { --depth; }
};

}  // namespace detail

class Evaluator {
public:
    explicit Evaluator(const ProgramModel& model, RunOptions opts = {})
        : model_(model), opts_(opts) {
        scriptEnv_.blocks.emplace_back();
    }

    // Mirrors program output to `os` as it is produced (the CLI's stdout).
    void set_live_output(std::ostream* os) { liveOut_ = os; }
    void set_trace_listener(std::function<void(const TraceEvent&)> fn) {
        traceListener_ = std::move(fn);
    }

    const ProgramModel& model() const { return model_; }
    ObjectStore& store() { return store_; }
    const std::string& output_text() const { return outBuf_; }
    const std::vector<TraceEvent>& trace_events() const { return traceEvents_; }

    // Runs one top-level statement in the persistent script scope.
    // Returns false when a top-level `return` ended the script.
    bool exec_script_stmt(const ast::Stmt& s) {
        Flow f = exec(s, scriptEnv_);
        return !f.returned;
    }
    Value eval_script_expr(const ast::Expr& e) { return eval(e, scriptEnv_); }

    // --- dispatch procedures ---

    // External call: the outermost concept declaring an incoming method wins;
    // levels without one are transparent.
    Value dispatch_external(const Reference& ref, const std::string& name,
                            std::vector<Value> args, Pos pos) {
        for (std::size_t lvl = 0; lvl < ref.segments.size(); ++lvl) {
            const ConceptInfo* c = ref.segments[lvl].conceptInfo;
            if (const MethodInfo* m = c->find_in(name))
                return invoke_method(c, *m, FrameKind::Incoming, ref, lvl,
                                     std::move(args), pos);
        }
        throw Error(ErrorKind::NoIncomingMethod, pos,
                    "no incoming method '" + name + "' on the reference chain");
    }

    // Delegation downward: the first concept below the frame's level
    // declaring an incoming method runs.
    Value dispatch_sub(const Frame& frame, const std::string& name,
                       std::vector<Value> args, Pos pos) {
        if (frame.level + 1 >= frame.ref.segments.size())
            throw Error(ErrorKind::NoChildSegment, pos,
                        "no child segment below '" +
                            frame.ref.segments[frame.level].conceptInfo->name +
                            "' for 'sub." + name + "'");
        for (std::size_t lvl = frame.level + 1; lvl < frame.ref.segments.size(); ++lvl) {
            const ConceptInfo* c = frame.ref.segments[lvl].conceptInfo;
            if (const MethodInfo* m = c->find_in(name))
                return invoke_method(c, *m, FrameKind::Incoming, frame.ref, lvl,
                                     std::move(args), pos);
        }
        throw Error(ErrorKind::NoIncomingMethod, pos,
                    "no incoming method '" + name + "' below '" +
                        frame.ref.segments[frame.level].conceptInfo->name + "'");
    }

    // Delegation upward: the first ancestor declaring an outgoing method runs.
    Value dispatch_super(const Frame& frame, const std::string& name,
                         std::vector<Value> args, Pos pos) {
        for (std::size_t lvl = frame.level; lvl-- > 0;) {
            const ConceptInfo* c = frame.ref.segments[lvl].conceptInfo;
            if (const MethodInfo* m = c->find_out(name))
                return invoke_method(c, *m, FrameKind::Outgoing, frame.ref, lvl,
                                     std::move(args), pos);
        }
        throw Error(ErrorKind::NoOutgoingMethod, pos,
                    "no outgoing method '" + name + "' above '" +
                        frame.ref.segments[frame.level].conceptInfo->name + "'");
    }

    // Bare and `this.` calls: the current level's outgoing method, else the
    // same outward scan as a super call.
    Value dispatch_internal(const Frame& frame, const std::string& name,
                            std::vector<Value> args, Pos pos) {
        for (std::size_t lvl = frame.level + 1; lvl-- > 0;) {
            const ConceptInfo* c = frame.ref.segments[lvl].conceptInfo;
            if (const MethodInfo* m = c->find_out(name))
                return invoke_method(c, *m, FrameKind::Outgoing, frame.ref, lvl,
                                     std::move(args), pos);
        }
        throw Error(ErrorKind::NoOutgoingMethod, pos,
                    "no outgoing method '" + name + "' visible from '" +
                        frame.ref.segments[frame.level].conceptInfo->name + "'");
    }

    // --- objects ---

    Reference instantiate(const ConceptInfo* c, std::optional<Reference> parentRef,
                          std::vector<Value> args, Pos pos) {
        if (!c->instantiable)
            throw Error(ErrorKind::NotInstantiable, pos,
                        "concept '" + c->name +
                            "' is not instantiable (its inclusion chain does not reach " +
                            kRootSpaceName + ")");
        Reference r;
        if (c->parentKind == ConceptInfo::ParentKind::Root) {
            if (parentRef)
                throw Error(ErrorKind::ParentMismatch, pos,
                            "'" + c->name + "' lives directly in " + kRootSpaceName +
                                " and takes no parent reference");
            r.handle = store_.issue_handle();
        } else {
            if (!parentRef)
                throw Error(ErrorKind::ParentMismatch, pos,
                            "no parent reference for 'new " + c->name + "'");
            if (parentRef->segments.empty() ||
                parentRef->segments.back().conceptInfo != c->parent)
                throw Error(ErrorKind::ParentMismatch, pos,
                            "parent reference for '" + c->name + "' must point at '" +
                                c->parent->name + "'");
            r = std::move(*parentRef);
        }
        Segment seg;
        seg.conceptInfo = c;
        seg.fields = coerce_tuple(std::move(args), c, pos);
        r.segments.push_back(std::move(seg));
        return r;
    }

    // Property access on a reference; the innermost declaring level wins.
    // Does not traverse the incoming-method chain.
    Value access_property(const Reference& ref, const std::string& name,
                          PropertyMode mode, std::optional<Value> v, Pos pos) {
        for (std::size_t lvl = ref.segments.size(); lvl-- > 0;) {
            const ConceptInfo* c = ref.segments[lvl].conceptInfo;
            if (const PropertyInfo* p = c->find_property(name)) {
                if (mode == PropertyMode::Get) return property_get(ref, lvl, *p, pos);
                if (!v)
                    throw Error(ErrorKind::ArityOrTypeError, pos,
                                "property set needs a value");
                property_set(ref, lvl, *p, std::move(*v), pos);
                return Value();
            }
        }
        throw Error(ErrorKind::UnknownField, pos,
                    "unknown field or property '" + name + "'");
    }

    static Reference prefix_of(const Reference& ref, std::size_t level) {
        Reference r;
        r.handle = ref.handle;
        r.segments.assign(ref.segments.begin(),
                          ref.segments.begin() + static_cast<std::ptrdiff_t>(level) + 1);
        return r;
    }

private:
    struct Flow {
        bool returned = false;
        Value value;
    };
    struct Slot {
        SemType type;
        Value value;
    };
    struct Env {
        Frame* frame = nullptr;
        std::vector<std::map<std::string, Slot>> blocks;
    };
    struct BlockScope {
        Env& env;
        explicit BlockScope(Env& e) : env(e) { env.blocks.emplace_back(); }
        ~BlockScope() { env.blocks.pop_back(); }
    };

    const ProgramModel& model_;
    RunOptions opts_;
    ObjectStore store_;
    Env scriptEnv_;
    int depth_ = 0;
    std::string outBuf_;
    std::ostream* liveOut_ = nullptr;
    std::vector<TraceEvent> traceEvents_;
    std::function<void(const TraceEvent&)> traceListener_;

    // --- trace ---

    void emit_trace(TracePhase phase, TraceDir dir, const std::string& conceptName,
                    const std::string& member) {
        TraceEvent e{phase, dir, conceptName, member};
        if (traceListener_) traceListener_(e);
        traceEvents_.push_back(std::move(e));
    }

    // --- frames ---

    Value invoke_method(const ConceptInfo* c, const MethodInfo& m, FrameKind kind,
                        const Reference& fullRef, std::size_t level,
                        std::vector<Value> args, Pos callPos) {
        if (args.size() != m.paramTypes.size())
            throw Error(ErrorKind::ArityOrTypeError, callPos,
                        "method '" + m.decl->name + "' expects " +
                            std::to_string(m.paramTypes.size()) + " argument(s), got " +
                            std::to_string(args.size()));
        detail::DepthGuard depth(depth_, opts_.maxDepth, callPos);
        TraceDir dir = kind == FrameKind::Incoming ? TraceDir::In : TraceDir::Out;
        emit_trace(TracePhase::Enter, dir, c->name, m.decl->name);
        Value result;
        try {
            Frame frame{fullRef, level, kind, Value()};
            Env env;
            env.frame = &frame;
            env.blocks.emplace_back();
            for (std::size_t i = 0; i < args.size(); ++i)
                env.blocks.back()[m.decl->params[i].name] =
                    Slot{m.paramTypes[i],
                         coerce(std::move(args[i]), m.paramTypes[i], callPos)};
            Flow flow = exec_block(m.decl->body, env);
            result = flow.returned ? std::move(flow.value) : Value();
            if (m.returnType.kind == SemType::Kind::Double && result.is_int())
                result = Value(static_cast<double>(result.as_int()));
        } catch (...) {
            emit_trace(TracePhase::Exit, dir, c->name, m.decl->name);
            throw;
        }
        emit_trace(TracePhase::Exit, dir, c->name, m.decl->name);
        return result;
    }

    Value run_accessor(const ast::Block& body, const Reference& ref, std::size_t level,
                       FrameKind kind, Value setterValue, const std::string& propName,
                       Pos pos) {
        detail::DepthGuard depth(depth_, opts_.maxDepth, pos);
        const std::string& conceptName = ref.segments[level].conceptInfo->name;
        TraceDir dir = kind == FrameKind::Getter ? TraceDir::Get : TraceDir::Set;
        emit_trace(TracePhase::Enter, dir, conceptName, propName);
        Value result;
        try {
            Frame frame{ref, level, kind, std::move(setterValue)};
            Env env;
            env.frame = &frame;
            env.blocks.emplace_back();
            Flow flow = exec_block(body, env);
            if (flow.returned) result = std::move(flow.value);
        } catch (...) {
            emit_trace(TracePhase::Exit, dir, conceptName, propName);
            throw;
        }
        emit_trace(TracePhase::Exit, dir, conceptName, propName);
        return result;
    }

    // --- properties and fields ---

    Value property_get(const Reference& ref, std::size_t level, const PropertyInfo& p,
                       Pos pos) {
        if (p.is_auto())
            return store_.read(prefix_of(ref, level), p.name, p.type);
        if (!p.decl->getBody)
            throw Error(ErrorKind::MissingAccessor, pos,
                        "property '" + p.name + "' has no getter");
        return run_accessor(*p.decl->getBody, ref, level, FrameKind::Getter, Value(),
                            p.name, pos);
    }

    void property_set(const Reference& ref, std::size_t level, const PropertyInfo& p,
                      Value v, Pos pos) {
        v = coerce(std::move(v), p.type, pos);
        if (p.is_auto()) {
            store_.write(prefix_of(ref, level), p.name, std::move(v));
            return;
        }
        if (!p.decl->setBody)
            throw Error(ErrorKind::MissingAccessor, pos,
                        "property '" + p.name + "' has no setter");
        run_accessor(*p.decl->setBody, ref, level, FrameKind::Setter, std::move(v),
                     p.name, pos);
    }

    struct MemberHit {
        std::size_t level = 0;
        const PropertyInfo* prop = nullptr;
        const FieldInfo* field = nullptr;
        std::size_t fieldIndex = 0;
    };

    // Innermost-first scan from `startLevel` toward the root for a property
    // or a segment field with this name.
    std::optional<MemberHit> find_member(const Reference& ref, std::size_t startLevel,
                                         const std::string& name) const {
        for (std::size_t lvl = startLevel + 1; lvl-- > 0;) {
            const ConceptInfo* c = ref.segments[lvl].conceptInfo;
            if (const PropertyInfo* p = c->find_property(name))
                return MemberHit{lvl, p, nullptr, 0};
            for (std::size_t i = 0; i < c->fields.size(); ++i)
                if (c->fields[i].name == name)
                    return MemberHit{lvl, nullptr, &c->fields[i], i};
        }
        return std::nullopt;
    }

    Value member_read(const Reference& ref, std::size_t startLevel,
                      const std::string& name, Pos pos) {
        auto hit = find_member(ref, startLevel, name);
        if (!hit)
            throw Error(ErrorKind::UnknownField, pos,
                        "unknown field or property '" + name + "'");
        if (hit->prop) return property_get(ref, hit->level, *hit->prop, pos);
        return ref.segments[hit->level].fields[hit->fieldIndex];
    }

    void member_write(const Reference& ref, std::size_t startLevel,
                      const std::string& name, Value v, Pos pos) {
        auto hit = find_member(ref, startLevel, name);
        if (!hit)
            throw Error(ErrorKind::UnknownField, pos,
                        "unknown field or property '" + name + "'");
        if (hit->field)
            throw Error(ErrorKind::AssignToSegmentField, pos,
                        "cannot assign to reference field '" + name + "'");
        property_set(ref, hit->level, *hit->prop, std::move(v), pos);
    }

    // --- values ---

    static std::string value_type_desc(const Value& v) {
        return std::visit(
            ast::overloaded{
                [](const VoidValue&) { return std::string("void"); },
                [](std::int64_t) { return std::string("int"); },
                [](double) { return std::string("double"); },
                [](bool) { return std::string("bool"); },
                [](const std::string&) { return std::string("string"); },
                [](const CharArray& ca) {
                    return "char[" + std::to_string(ca.length) + "]";
                },
                [](const ConceptValue& cv) {
                    return "value of concept '" + cv.conceptInfo->name + "'";
                },
                [](const Reference&) { return std::string("reference"); },
            },
            v.data);
    }

    Value coerce(Value v, const SemType& t, Pos pos) const {
        switch (t.kind) {
            case SemType::Kind::Int:
                if (v.is_int()) return v;
                break;
            case SemType::Kind::Double:
                if (v.is_double()) return v;
                if (v.is_int()) return Value(static_cast<double>(v.as_int()));
                break;
            case SemType::Kind::Bool:
                if (v.is_bool()) return v;
                break;
            case SemType::Kind::Str:
                if (v.is_str()) return v;
                break;
            case SemType::Kind::Void:
                if (v.is_void()) return v;
                break;
            case SemType::Kind::CharArray: {
                std::string text;
                if (v.is_str()) {
                    text = v.as_str();
                } else if (v.is_char_array()) {
                    const CharArray& ca = v.as_char_array();
                    if (ca.length == t.charLen) return v;
                    text = char_array_display(ca);
                } else {
                    break;
                }
                if (static_cast<int>(text.size()) > t.charLen)
                    throw Error(ErrorKind::CharArrayOverflow, pos,
                                "text of length " + std::to_string(text.size()) +
                                    " does not fit char[" + std::to_string(t.charLen) +
                                    "]");
                return Value(make_char_array(t.charLen, text));
            }
            case SemType::Kind::Concept:
                if (v.is_concept_value() &&
                    v.as_concept_value().conceptInfo == t.conceptInfo)
                    return v;
                if (v.is_reference()) {
                    for (const Segment& s : v.as_reference().segments)
                        if (s.conceptInfo == t.conceptInfo) return v;
                }
                break;
        }
        throw Error(ErrorKind::ArityOrTypeError, pos,
                    "type mismatch: expected " + type_name(t) + ", got " +
                        value_type_desc(v));
    }

    std::vector<Value> coerce_tuple(std::vector<Value> args, const ConceptInfo* c,
                                    Pos pos) const {
        if (args.size() != c->fields.size())
            throw Error(ErrorKind::ArityOrTypeError, pos,
                        "concept '" + c->name + "' has " +
                            std::to_string(c->fields.size()) + " field(s), got " +
                            std::to_string(args.size()) + " value(s)");
        std::vector<Value> out;
        out.reserve(args.size());
        for (std::size_t i = 0; i < args.size(); ++i)
            out.push_back(coerce(std::move(args[i]), c->fields[i].type, pos));
        return out;
    }

    SemType sem_type(const ast::TypeRef& t) const {
        using K = ast::TypeRef::Kind;
        switch (t.kind) {
            case K::Void: return {SemType::Kind::Void, 0, nullptr};
            case K::Int: return {SemType::Kind::Int, 0, nullptr};
            case K::Double: return {SemType::Kind::Double, 0, nullptr};
            case K::Bool: return {SemType::Kind::Bool, 0, nullptr};
            case K::Str: return {SemType::Kind::Str, 0, nullptr};
            case K::CharArray: return {SemType::Kind::CharArray, t.charLen, nullptr};
            case K::Named: {
                const ConceptInfo* c = model_.find_concept(t.name);
                if (!c)
                    throw Error(ErrorKind::UnknownType, t.pos,
                                "unknown type '" + t.name + "'");
                return {SemType::Kind::Concept, 0, c};
            }
        }
        return {SemType::Kind::Void, 0, nullptr};
    }

    // --- builtins ---

    void write_output(const std::string& s) {
        outBuf_ += s;
        if (liveOut_) (*liveOut_) << s;
    }

    Value builtin_print(std::vector<Value> args, Pos pos) {
        if (args.size() != 1)
            throw Error(ErrorKind::ArityOrTypeError, pos,
                        "print expects 1 argument, got " + std::to_string(args.size()));
        write_output(format_value(args[0]) + "\n");
        return Value();
    }

    Value builtin_assert(std::vector<Value> args, Pos pos) {
        if (args.size() != 1 || !args[0].is_bool())
            throw Error(ErrorKind::ArityOrTypeError, pos,
                        "assert expects 1 bool argument");
        if (!args[0].as_bool())
            throw Error(ErrorKind::AssertionFailed, pos, "assertion failed");
        return Value();
    }

    // --- scopes ---

    Slot* find_slot(Env& env, const std::string& name) {
        for (std::size_t i = env.blocks.size(); i-- > 0;) {
            auto it = env.blocks[i].find(name);
            if (it != env.blocks[i].end()) return &it->second;
        }
        return nullptr;
    }

    // --- expression evaluation ---

    std::vector<Value> eval_args(const std::vector<ast::ExprPtr>& xs, Env& env) {
        std::vector<Value> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(eval(*x, env));
        return out;
    }

    Value eval(const ast::Expr& e, Env& env) {
        return std::visit(
            ast::overloaded{
                [&](const ast::IntLit& n) { return Value(n.value); },
                [&](const ast::FloatLit& n) { return Value(n.value); },
                [&](const ast::StrLit& n) { return Value(n.value); },
                [&](const ast::BoolLit& n) { return Value(n.value); },
                [&](const ast::Ident& n) { return eval_ident(n, e.pos, env); },
                [&](const ast::FieldAccess& n) {
                    Value base = eval(*n.base, env);
                    if (base.is_reference()) {
                        const Reference& ref = base.as_reference();
                        return member_read(ref, ref.segments.size() - 1, n.name, e.pos);
                    }
                    if (base.is_concept_value()) {
                        const ConceptValue& cv = base.as_concept_value();
                        for (std::size_t i = 0; i < cv.conceptInfo->fields.size(); ++i)
                            if (cv.conceptInfo->fields[i].name == n.name)
                                return cv.fields[i];
                        throw Error(ErrorKind::UnknownField, e.pos,
                                    "unknown field or property '" + n.name + "'");
                    }
                    throw Error(ErrorKind::ArityOrTypeError, e.pos,
                                "field access on " + value_type_desc(base));
                },
                [&](const ast::MethodCall& n) {
                    std::vector<Value> args = eval_args(n.args, env);
                    if (std::holds_alternative<ast::ThisExpr>(n.base->node)) {
                        require_frame(env, e.pos,
                                      "'this' is only available inside a method");
                        return dispatch_internal(*env.frame, n.name, std::move(args),
                                                 e.pos);
                    }
                    Value base = eval(*n.base, env);
                    if (base.is_reference())
                        return dispatch_external(base.as_reference(), n.name,
                                                 std::move(args), e.pos);
                    throw Error(ErrorKind::ArityOrTypeError, e.pos,
                                "method call on " + value_type_desc(base));
                },
                [&](const ast::Call& n) {
                    if (const ConceptInfo* c = model_.find_concept(n.name)) {
                        ConceptValue cv;
                        cv.conceptInfo = c;
                        cv.fields = coerce_tuple(eval_args(n.args, env), c, e.pos);
                        return Value(std::move(cv));
                    }
                    if (n.name == "print") return builtin_print(eval_args(n.args, env), e.pos);
                    if (n.name == "assert")
                        return builtin_assert(eval_args(n.args, env), e.pos);
                    if (env.frame)
                        return dispatch_internal(*env.frame, n.name,
                                                 eval_args(n.args, env), e.pos);
                    throw Error(ErrorKind::UndefinedVariable, e.pos,
                                "undefined function '" + n.name + "'");
                },
                [&](const ast::SuperCall& n) {
                    require_frame(env, e.pos,
                                  "'super' is only available inside a method");
                    return dispatch_super(*env.frame, n.name, eval_args(n.args, env),
                                          e.pos);
                },
                [&](const ast::SubCall& n) {
                    require_frame(env, e.pos, "'sub' is only available inside a method");
                    return dispatch_sub(*env.frame, n.name, eval_args(n.args, env),
                                        e.pos);
                },
                [&](const ast::ThisExpr&) {
                    require_frame(env, e.pos,
                                  "'this' is only available inside a method");
                    return Value(prefix_of(env.frame->ref, env.frame->level));
                },
                [&](const ast::ValueKeyword&) {
                    if (!env.frame || env.frame->kind != FrameKind::Setter)
                        throw Error(ErrorKind::UndefinedVariable, e.pos,
                                    "'value' is only bound inside a setter");
                    return env.frame->setterValue;
                },
                [&](const ast::NewExpr& n) {
                    const ConceptInfo* c = model_.find_concept(n.conceptName);
                    if (!c)
                        throw Error(ErrorKind::UndefinedVariable, e.pos,
                                    "unknown concept '" + n.conceptName + "'");
                    std::vector<Value> args = eval_args(n.args, env);
                    std::optional<Reference> parent;
                    if (n.parent) {
                        Value pv = eval(*n.parent, env);
                        if (!pv.is_reference())
                            throw Error(ErrorKind::ParentMismatch, n.parent->pos,
                                        "parent of 'new' must be a reference, got " +
                                            value_type_desc(pv));
                        parent = pv.as_reference();
                    } else if (c->parentKind == ConceptInfo::ParentKind::Concept) {
                        // inside a method of the parent, `in this` is implied
                        if (!env.frame)
                            throw Error(ErrorKind::ParentMismatch, e.pos,
                                        "no parent reference for 'new " + n.conceptName +
                                            "'");
                        parent = prefix_of(env.frame->ref, env.frame->level);
                    }
                    return Value(
                        instantiate(c, std::move(parent), std::move(args), e.pos));
                },
                [&](const ast::Unary& n) {
                    Value v = eval(*n.operand, env);
                    if (n.op == ast::Unary::Op::Neg) {
                        if (v.is_int()) return Value(-v.as_int());
                        if (v.is_double()) return Value(-v.as_double());
                        throw Error(ErrorKind::ArityOrTypeError, e.pos,
                                    "operand of unary '-' must be numeric, got " +
                                        value_type_desc(v));
                    }
                    if (!v.is_bool())
                        throw Error(ErrorKind::ArityOrTypeError, e.pos,
                                    "operand of '!' must be a bool, got " +
                                        value_type_desc(v));
                    return Value(!v.as_bool());
                },
                [&](const ast::Binary& n) { return eval_binary(n, e.pos, env); },
            },
            e.node);
    }

    Value eval_ident(const ast::Ident& n, Pos pos, Env& env) {
        if (Slot* s = find_slot(env, n.name)) return s->value;
        if (env.frame) {
            if (auto hit = find_member(env.frame->ref, env.frame->level, n.name)) {
                if (hit->prop)
                    return property_get(env.frame->ref, hit->level, *hit->prop, pos);
                return env.frame->ref.segments[hit->level].fields[hit->fieldIndex];
            }
        }
        throw Error(ErrorKind::UndefinedVariable, pos,
                    "undefined variable '" + n.name + "'");
    }

    void require_frame(Env& env, Pos pos, const std::string& msg) {
        if (!env.frame) throw Error(ErrorKind::UndefinedVariable, pos, msg);
    }

    static bool is_texty(const Value& v) { return v.is_str() || v.is_char_array(); }
    static std::string as_text(const Value& v) {
        return v.is_str() ? v.as_str() : char_array_display(v.as_char_array());
    }

    Value eval_binary(const ast::Binary& n, Pos pos, Env& env) {
        using Op = ast::Binary::Op;
        if (n.op == Op::And || n.op == Op::Or) {
            Value l = eval(*n.lhs, env);
            if (!l.is_bool())
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "operands of '&&'/'||' must be bools");
            if (n.op == Op::Or && l.as_bool()) return Value(true);
            if (n.op == Op::And && !l.as_bool()) return Value(false);
            Value r = eval(*n.rhs, env);
            if (!r.is_bool())
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "operands of '&&'/'||' must be bools");
            return r;
        }

        Value l = eval(*n.lhs, env);
        Value r = eval(*n.rhs, env);
        bool bothInt = l.is_int() && r.is_int();
        bool numeric = (l.is_int() || l.is_double()) && (r.is_int() || r.is_double());
        auto dbl = [](const Value& v) {
            return v.is_int() ? static_cast<double>(v.as_int()) : v.as_double();
        };

        switch (n.op) {
            case Op::Eq:
            case Op::Ne: {
                bool eq = numeric && !(l.is_int() == r.is_int())
                              ? dbl(l) == dbl(r)
                              : l == r;
                return Value(n.op == Op::Eq ? eq : !eq);
            }
            case Op::Lt:
            case Op::Le:
            case Op::Gt:
            case Op::Ge: {
                int cmp;
                if (bothInt)
                    cmp = l.as_int() < r.as_int() ? -1 : l.as_int() > r.as_int() ? 1 : 0;
                else if (numeric)
                    cmp = dbl(l) < dbl(r) ? -1 : dbl(l) > dbl(r) ? 1 : 0;
                else if (l.is_str() && r.is_str())
                    cmp = l.as_str() < r.as_str() ? -1 : l.as_str() > r.as_str() ? 1 : 0;
                else
                    throw Error(ErrorKind::ArityOrTypeError, pos,
                                "invalid operand types for comparison: " +
                                    value_type_desc(l) + " and " + value_type_desc(r));
                switch (n.op) {
                    case Op::Lt: return Value(cmp < 0);
                    case Op::Le: return Value(cmp <= 0);
                    case Op::Gt: return Value(cmp > 0);
                    default: return Value(cmp >= 0);
                }
            }
            case Op::Add:
                if (bothInt) return Value(l.as_int() + r.as_int());
                if (numeric) return Value(dbl(l) + dbl(r));
                if (is_texty(l) && is_texty(r)) return Value(as_text(l) + as_text(r));
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "invalid operand types for '+': " + value_type_desc(l) +
                                " and " + value_type_desc(r));
            case Op::Sub:
                if (bothInt) return Value(l.as_int() - r.as_int());
                if (numeric) return Value(dbl(l) - dbl(r));
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "operands of '-' must be numeric");
            case Op::Mul:
                if (bothInt) return Value(l.as_int() * r.as_int());
                if (numeric) return Value(dbl(l) * dbl(r));
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "operands of '*' must be numeric");
            case Op::Div:
                if (bothInt) {
                    if (r.as_int() == 0)
                        throw Error(ErrorKind::DivisionByZero, pos,
                                    "integer division by zero");
                    return Value(l.as_int() / r.as_int());
                }
                if (numeric) return Value(dbl(l) / dbl(r));  // IEEE inf/nan
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "operands of '/' must be numeric");
            case Op::Mod:
                if (bothInt) {
                    if (r.as_int() == 0)
                        throw Error(ErrorKind::DivisionByZero, pos,
                                    "integer modulo by zero");
                    return Value(l.as_int() % r.as_int());
                }
                throw Error(ErrorKind::ArityOrTypeError, pos,
                            "operands of '%' must be ints");
            default:
                throw Error(ErrorKind::ArityOrTypeError, pos, "invalid operator");
        }
    }

    // --- statements ---

    Flow exec(const ast::Stmt& s, Env& env) {
        return std::visit(
            ast::overloaded{
                [&](const ast::VarDecl& v) {
                    SemType t = sem_type(v.type);
                    Value init = coerce(eval(*v.init, env), t, s.pos);
                    env.blocks.back()[v.name] = Slot{t, std::move(init)};
                    return Flow{};
                },
                [&](const ast::Assign& a) {
                    Value v = eval(*a.value, env);
                    do_assign(*a.target, std::move(v), env);
                    return Flow{};
                },
                [&](const ast::If& n) {
                    Value cond = eval(*n.cond, env);
                    if (!cond.is_bool())
                        throw Error(ErrorKind::ArityOrTypeError, n.cond->pos,
                                    "condition must be a bool, got " +
                                        value_type_desc(cond));
                    if (cond.as_bool()) return exec(*n.thenBranch, env);
                    if (n.elseBranch) return exec(*n.elseBranch, env);
                    return Flow{};
                },
                [&](const ast::While& n) {
                    for (;;) {
                        Value cond = eval(*n.cond, env);
                        if (!cond.is_bool())
                            throw Error(ErrorKind::ArityOrTypeError, n.cond->pos,
                                        "condition must be a bool, got " +
                                            value_type_desc(cond));
                        if (!cond.as_bool()) return Flow{};
                        Flow f = exec(*n.body, env);
                        if (f.returned) return f;
                    }
                },
                [&](const ast::Return& r) {
                    Flow f;
                    f.returned = true;
                    if (r.value) f.value = eval(*r.value, env);
                    return f;
                },
                [&](const ast::ExprStmt& n) {
                    eval(*n.expr, env);
                    return Flow{};
                },
                [&](const ast::Block& b) { return exec_block(b, env); },
            },
            s.node);
    }

    Flow exec_block(const ast::Block& b, Env& env) {
        BlockScope scope(env);
        for (const auto& s : b.statements) {
            Flow f = exec(*s, env);
            if (f.returned) return f;
        }
        return Flow{};
    }

    // --- assignment targets ---

    // Walks an identifier-rooted field path to the local slot cell it names,
    // so concept values held in locals mutate in place (value semantics).
    Value* resolve_local_path(const ast::Expr& e, Env& env) {
        if (const auto* id = std::get_if<ast::Ident>(&e.node)) {
            Slot* s = find_slot(env, id->name);
            return s ? &s->value : nullptr;
        }
        if (const auto* fa = std::get_if<ast::FieldAccess>(&e.node)) {
            Value* base = resolve_local_path(*fa->base, env);
            if (!base || !base->is_concept_value()) return nullptr;
            ConceptValue& cv = base->as_concept_value();
            for (std::size_t i = 0; i < cv.conceptInfo->fields.size(); ++i)
                if (cv.conceptInfo->fields[i].name == fa->name) return &cv.fields[i];
            return nullptr;
        }
        return nullptr;
    }

    void do_assign(const ast::Expr& target, Value v, Env& env) {
        if (const auto* id = std::get_if<ast::Ident>(&target.node)) {
            if (Slot* s = find_slot(env, id->name)) {
                s->value = coerce(std::move(v), s->type, target.pos);
                return;
            }
            if (env.frame) {
                if (auto hit =
                        find_member(env.frame->ref, env.frame->level, id->name)) {
                    if (hit->field)
                        throw Error(ErrorKind::AssignToSegmentField, target.pos,
                                    "cannot assign to reference field '" + id->name +
                                        "'");
                    property_set(env.frame->ref, hit->level, *hit->prop, std::move(v),
                                 target.pos);
                    return;
                }
            }
            throw Error(ErrorKind::UndefinedVariable, target.pos,
                        "assignment to undefined variable '" + id->name + "'");
        }

        const auto& fa = std::get<ast::FieldAccess>(target.node);
        if (Value* cell = resolve_local_path(*fa.base, env)) {
            if (cell->is_concept_value()) {
                ConceptValue& cv = cell->as_concept_value();
                for (std::size_t i = 0; i < cv.conceptInfo->fields.size(); ++i) {
                    if (cv.conceptInfo->fields[i].name == fa.name) {
                        cv.fields[i] = coerce(std::move(v),
                                              cv.conceptInfo->fields[i].type, target.pos);
                        return;
                    }
                }
                throw Error(ErrorKind::UnknownField, target.pos,
                            "unknown field or property '" + fa.name + "'");
            }
            if (cell->is_reference()) {
                const Reference& ref = cell->as_reference();
                member_write(ref, ref.segments.size() - 1, fa.name, std::move(v),
                             target.pos);
                return;
            }
            throw Error(ErrorKind::ArityOrTypeError, target.pos,
                        "cannot assign into " + value_type_desc(*cell));
        }
        Value base = eval(*fa.base, env);
        if (base.is_reference()) {
            const Reference& ref = base.as_reference();
            member_write(ref, ref.segments.size() - 1, fa.name, std::move(v),
                         target.pos);
            return;
        }
        throw Error(ErrorKind::ArityOrTypeError, target.pos,
                    "cannot assign to a field of a temporary value");
    }
};

// Runs a resolved program's top-level statements against a fresh store.
// Failures never escape; they land in the outcome's error fields.
inline ExecutionOutcome run_program(
    const ProgramModel& model, const RunOptions& opts = {},
    std::ostream* liveOut = nullptr,
    const std::function<void(const TraceEvent&)>& traceListener = {}) {
    Evaluator ev(model, opts);
    ev.set_live_output(liveOut);
    ev.set_trace_listener(traceListener);
    ExecutionOutcome out;
    try {
        for (const ast::Stmt* s : model.topStatements)
            if (!ev.exec_script_stmt(*s)) break;
    } catch (const Error& err) {
        out.ok = false;
        out.errorKind = err.kind();
        out.errorMessage = err.what();
        out.errorPos = err.pos();
    }
    out.output = ev.output_text();
    out.trace = ev.trace_events();
    return out;
}

}  // namespace copl
