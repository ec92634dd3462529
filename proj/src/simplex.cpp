#include "rv/simplex.hpp"

namespace rv {

namespace {

// Dense tableau with Bland's rule.
struct Tableau {
    std::vector<std::vector<Rational>> a;  // rows x (columns + 1), last entry is the rhs
    std::vector<int> basis;
    int columns = 0;

    void pivot(int r, int c)
    {
        const Rational p = a[r][c];
        for (auto& x : a[r])
            x /= p;
        for (size_t k = 0; k < a.size(); ++k) {
            if (static_cast<int>(k) == r || a[k][c] == 0)
                continue;
            const Rational f = a[k][c];
            for (int j = 0; j <= columns; ++j)
                a[k][j] -= f * a[r][j];
        }
        basis[r] = c;
    }

    // Returns false when unbounded.
    bool optimise(const std::vector<Rational>& cost, const std::vector<char>& allowed)
    {
        const int m = static_cast<int>(a.size());
        for (;;) {
            int enter = -1;
            for (int j = 0; j < columns && enter < 0; ++j) {
                if (!allowed[j])
                    continue;
                Rational reduced = -cost[j];
                for (int r = 0; r < m; ++r)
                    reduced += cost[basis[r]] * a[r][j];
                if (reduced < 0)
                    enter = j;
            }
            if (enter < 0)
                return true;
            int leave = -1;
            Rational best;
            for (int r = 0; r < m; ++r) {
                if (a[r][enter] <= 0)
                    continue;
                Rational q = a[r][columns] / a[r][enter];
                if (leave < 0 || q < best || (q == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = q;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

std::optional<std::vector<Rational>> maximize(int variables, const std::vector<LinearConstraint>& rows,
                                              const std::vector<Rational>& objective)
{
    const int m = static_cast<int>(rows.size());
    int slacks = 0, artificials = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.coef.size()) != variables)
            throw GameError("constraint of the wrong width");
        const bool flip = row.rhs < 0;
        Sense s = row.sense;
        if (flip && s != Sense::eq)
            s = s == Sense::le ? Sense::ge : Sense::le;
        slacks += s != Sense::eq;
        artificials += s != Sense::le;
    }
    Tableau t;
    t.columns = variables + slacks + artificials;
    t.a.assign(m, std::vector<Rational>(t.columns + 1, 0));
    t.basis.assign(m, -1);
    std::vector<char> artificial(t.columns, 0);
    int next_slack = variables, next_art = variables + slacks;
    for (int r = 0; r < m; ++r) {
        const auto& row = rows[r];
        const bool flip = row.rhs < 0;
        Sense s = row.sense;
        if (flip && s != Sense::eq)
            s = s == Sense::le ? Sense::ge : Sense::le;
        for (int j = 0; j < variables; ++j)
            t.a[r][j] = flip ? Rational(-row.coef[j]) : row.coef[j];
        t.a[r][t.columns] = flip ? Rational(-row.rhs) : row.rhs;
        if (s == Sense::le) {
            t.a[r][next_slack] = 1;
            t.basis[r] = next_slack++;
        } else {
            if (s == Sense::ge)
                t.a[r][next_slack++] = -1;
            t.a[r][next_art] = 1;
            artificial[next_art] = 1;
            t.basis[r] = next_art++;
        }
    }
    std::vector<char> all(t.columns, 1), real(t.columns, 1);
    for (int j = 0; j < t.columns; ++j)
        real[j] = !artificial[j];
    if (artificials > 0) {
        std::vector<Rational> cost(t.columns, 0);
        for (int j = 0; j < t.columns; ++j)
            if (artificial[j])
                cost[j] = -1;
        t.optimise(cost, all);
        for (int r = 0; r < m; ++r)
            if (artificial[t.basis[r]] && t.a[r][t.columns] != 0)
                return std::nullopt;
        for (int r = 0; r < m; ++r) {
            if (!artificial[t.basis[r]])
                continue;
            for (int j = 0; j < t.columns; ++j)
                if (!artificial[j] && t.a[r][j] != 0) {
                    t.pivot(r, j);
                    break;
                }
        }
    }
    std::vector<Rational> cost(t.columns, 0);
    for (int j = 0; j < variables; ++j)
        cost[j] = objective.at(j);
    if (!t.optimise(cost, real))
        return std::nullopt;
    std::vector<Rational> x(variables, 0);
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < variables)
            x[t.basis[r]] = t.a[r][t.columns];
    return x;
}

std::optional<std::vector<Rational>> feasible_point(int variables,
                                                    const std::vector<LinearConstraint>& rows)
{
    return maximize(variables, rows, std::vector<Rational>(variables, 0));
}

}  // namespace rv
