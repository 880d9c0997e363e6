#pragma once

#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "orem/core.hpp"
#include "orem/csv.hpp"

namespace orem {

enum class VarKind { continuous, integer, binary };
enum class Sense { le, ge, eq };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lb = 0.0;
    double ub = kInf;
};

struct LinTerm {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<LinTerm> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

/// Semantic roles the sizing layer attaches to variables so solutions can be
/// read back without string parsing. a/b carry the candidate index or the
/// (period, hour) cell.
enum class Role { unit_count, n_bess, p_char, p_disc, p_curt, u_char, u_disc, e_bess };

/// A BESS cell's charge/discharge pair: the binary must be 1 whenever its
/// power variable is positive, and the two binaries exclude each other.
struct BessModeGroup {
    int u_char = -1;
    int p_char = -1;
    int u_disc = -1;
    int p_disc = -1;
};

class MilpModel {
public:
    std::vector<Variable> vars;
    std::vector<Constraint> rows;
    std::vector<double> obj;
    double obj_constant = 0.0;
    std::vector<BessModeGroup> bess_mode_groups;

    int add_var(std::string name, VarKind kind, double lb, double ub) {
        vars.push_back({std::move(name), kind, lb, ub});
        obj.push_back(0.0);
        return static_cast<int>(vars.size()) - 1;
    }

    void add_row(std::string name, std::vector<LinTerm> terms, Sense sense, double rhs) {
        for (const auto& t : terms)
            if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
                throw ModelError("constraint '" + name + "' references unregistered variable");
        rows.push_back({std::move(name), std::move(terms), sense, rhs});
    }

    void bind_role(Role r, int a, int b, int var) {
        auto key = std::make_tuple(static_cast<int>(r), a, b);
        if (!role_index_.emplace(key, var).second)
            throw ModelError("role bound twice for the same index");
    }

    int var_of(Role r, int a = 0, int b = 0) const {
        auto it = role_index_.find(std::make_tuple(static_cast<int>(r), a, b));
        if (it == role_index_.end()) throw ModelError("no variable bound for requested role");
        return it->second;
    }

    bool has_role(Role r, int a = 0, int b = 0) const {
        return role_index_.count(std::make_tuple(static_cast<int>(r), a, b)) > 0;
    }

    const std::map<std::tuple<int, int, int>, int>& role_map() const { return role_index_; }

    int num_vars() const { return static_cast<int>(vars.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    double objective_value(const std::vector<double>& x) const {
        double v = obj_constant;
        for (int j = 0; j < num_vars(); ++j) v += obj[j] * x[j];
        return v;
    }

    double row_activity(int r, const std::vector<double>& x) const {
        double a = 0.0;
        for (const auto& t : rows[r].terms) a += t.coef * x[t.var];
        return a;
    }

    /// Largest constraint or bound violation of an assignment.
    double max_violation(const std::vector<double>& x) const {
        double worst = 0.0;
        for (int j = 0; j < num_vars(); ++j) {
            worst = std::max(worst, vars[j].lb - x[j]);
            worst = std::max(worst, x[j] - vars[j].ub);
        }
        for (int r = 0; r < num_rows(); ++r) {
            const double a = row_activity(r, x);
            switch (rows[r].sense) {
                case Sense::le: worst = std::max(worst, a - rows[r].rhs); break;
                case Sense::ge: worst = std::max(worst, rows[r].rhs - a); break;
                case Sense::eq: worst = std::max(worst, std::abs(a - rows[r].rhs)); break;
            }
        }
        return worst;
    }

    void write_instance(std::ostream& out) const {
        out << "milp " << num_vars() << ' ' << num_rows() << '\n';
        for (const auto& v : vars) {
            out << "var " << v.name << ' '
                << (v.kind == VarKind::continuous ? 'c' : v.kind == VarKind::integer ? 'i' : 'b') << ' '
                << bound_text(v.lb) << ' ' << bound_text(v.ub) << '\n';
        }
        out << "obj " << csv::format_double(obj_constant);
        for (int j = 0; j < num_vars(); ++j)
            if (obj[j] != 0.0) out << ' ' << j << ':' << csv::format_double(obj[j]);
        out << '\n';
        for (const auto& c : rows) {
            out << "row " << c.name << ' '
                << (c.sense == Sense::le ? "<=" : c.sense == Sense::ge ? ">=" : "=") << ' '
                << csv::format_double(c.rhs);
            for (const auto& t : c.terms) out << ' ' << t.var << ':' << csv::format_double(t.coef);
            out << '\n';
        }
        for (const auto& g : bess_mode_groups)
            out << "modegroup " << g.u_char << ' ' << g.p_char << ' ' << g.u_disc << ' ' << g.p_disc << '\n';
        for (const auto& [key, var] : role_index_)
            out << "role " << std::get<0>(key) << ' ' << std::get<1>(key) << ' ' << std::get<2>(key)
                << ' ' << var << '\n';
    }

    static MilpModel read_instance(std::istream& in) {
        MilpModel m;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string tag;
            ls >> tag;
            if (tag == "milp") {
                continue;
            } else if (tag == "var") {
                std::string name, kind, lb, ub;
                ls >> name >> kind >> lb >> ub;
                VarKind k = kind == "c" ? VarKind::continuous : kind == "i" ? VarKind::integer : VarKind::binary;
                m.add_var(name, k, parse_bound(lb), parse_bound(ub));
            } else if (tag == "obj") {
                ls >> m.obj_constant;
                std::string term;
                while (ls >> term) {
                    auto [j, v] = parse_term(term);
                    m.obj[j] = v;
                }
            } else if (tag == "row") {
                std::string name, sense;
                double rhs;
                ls >> name >> sense >> rhs;
                std::vector<LinTerm> terms;
                std::string term;
                while (ls >> term) {
                    auto [j, v] = parse_term(term);
                    terms.push_back({j, v});
                }
                m.add_row(name, std::move(terms),
                          sense == "<=" ? Sense::le : sense == ">=" ? Sense::ge : Sense::eq, rhs);
            } else if (tag == "modegroup") {
                BessModeGroup g;
                ls >> g.u_char >> g.p_char >> g.u_disc >> g.p_disc;
                m.bess_mode_groups.push_back(g);
            } else if (tag == "role") {
                int r, a, b, var;
                ls >> r >> a >> b >> var;
                m.bind_role(static_cast<Role>(r), a, b, var);
            } else {
                throw InputError("unknown instance line: " + line);
            }
        }
        return m;
    }

private:
    static std::string bound_text(double v) {
        if (v == kInf) return "inf";
        if (v == -kInf) return "-inf";
        return csv::format_double(v);
    }
    static double parse_bound(const std::string& s) {
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        return std::stod(s);
    }
    static std::pair<int, double> parse_term(const std::string& s) {
        auto pos = s.find(':');
        if (pos == std::string::npos) throw InputError("bad sparse term: " + s);
        return {std::stoi(s.substr(0, pos)), std::stod(s.substr(pos + 1))};
    }

    std::map<std::tuple<int, int, int>, int> role_index_;
};

}  // namespace orem
