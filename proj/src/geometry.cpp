#include "contactflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace contactflow {

ContactChart ContactChart::darboux(int n)
{
    if (n < 1)
        throw std::invalid_argument("ContactChart: n must be >= 1");
    ContactChart chart;
    chart.n = n;
    chart.labels.reserve(2 * n + 1);
    chart.labels.push_back("s");
    for (int i = 1; i <= n; ++i)
        chart.labels.push_back("q" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        chart.labels.push_back("p" + std::to_string(i));
    return chart;
}

ContactChart ContactChart::named(std::string s_label,
                                 std::vector<std::string> q_labels,
                                 std::vector<std::string> p_labels)
{
    if (q_labels.empty() || q_labels.size() != p_labels.size())
        throw std::invalid_argument("ContactChart: need n >= 1 matching q/p labels");
    ContactChart chart;
    chart.n = static_cast<int>(q_labels.size());
    chart.labels.push_back(std::move(s_label));
    for (auto& l : q_labels) chart.labels.push_back(std::move(l));
    for (auto& l : p_labels) chart.labels.push_back(std::move(l));
    for (std::size_t i = 0; i < chart.labels.size(); ++i)
        for (std::size_t j = i + 1; j < chart.labels.size(); ++j)
            if (chart.labels[i] == chart.labels[j])
                throw std::invalid_argument("ContactChart: labels must be unique");
    return chart;
}

HamiltonianGradient ContactHamiltonian::gradient(const PhasePoint& x) const
{
    if (grad)
        return grad(x);
    // Central differences over (s, q, p) with per-coordinate step.
    HamiltonianGradient g;
    const int n = x.n();
    g.dh_dq.resize(n);
    g.dh_dp.resize(n);
    PhasePoint y = x;
    auto diff = [&](double& slot, double center) {
        const double h = fd_step(center);
        slot = center + h;
        const double fp = value(y);
        slot = center - h;
        const double fm = value(y);
        slot = center;
        return (fp - fm) / (2.0 * h);
    };
    g.dh_ds = diff(y.s, x.s);
    for (int i = 0; i < n; ++i)
        g.dh_dq[i] = diff(y.q[i], x.q[i]);
    for (int i = 0; i < n; ++i)
        g.dh_dp[i] = diff(y.p[i], x.p[i]);
    return g;
}

double contact_form_apply(const PhasePoint& x, const TangentVector& v)
{
    if (x.q.size() != x.p.size() || v.dq.size() != v.dp.size() ||
        x.q.size() != v.dq.size())
        throw std::invalid_argument("contact_form_apply: dimension mismatch");
    double acc = v.ds;
    for (std::size_t i = 0; i < x.p.size(); ++i)
        acc -= x.p[i] * v.dq[i];
    return acc;
}

namespace {

// Component matrices of eta and d(eta) on the ordered basis
// (e_s, e_q1, e_p1, ..., e_qn, e_pn).
struct FormComponents {
    Vec eta;                        // eta(e_a)
    std::vector<Vec> omega;         // d(eta)(e_a, e_b)
};

FormComponents assemble_components(const PhasePoint& x)
{
    const int n = x.n();
    const int dim = 2 * n + 1;
    FormComponents c;
    c.eta.assign(dim, 0.0);
    c.omega.assign(dim, Vec(dim, 0.0));
    c.eta[0] = 1.0;                         // ds slot
    for (int i = 0; i < n; ++i) {
        const int qi = 1 + 2 * i;
        const int pi = qi + 1;
        c.eta[qi] = -x.p[i];
        c.omega[qi][pi] = 1.0;              // d(eta) = dq^i ^ dp_i
        c.omega[pi][qi] = -1.0;
    }
    return c;
}

// Direct expansion of eta ^ omega^n over permutations of the basis, using
// the determinant convention for wedge products. The 1/(2^n) compensates
// the two orderings of each omega argument pair.
double wedge_expansion(const FormComponents& c, int n)
{
    const int dim = 2 * n + 1;
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    // Iterate permutations in lexicographic order, tracking parity by
    // counting inversions each time (dim <= 9, cost is negligible).
    do {
        double term = c.eta[perm[0]];
        if (term == 0.0)
            continue;
        for (int k = 0; k < n && term != 0.0; ++k)
            term *= c.omega[perm[1 + 2 * k]][perm[2 + 2 * k]];
        if (term == 0.0)
            continue;
        int inversions = 0;
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                if (perm[a] > perm[b])
                    ++inversions;
        total += (inversions % 2 == 0 ? term : -term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    double norm = 1.0;
    for (int k = 0; k < n; ++k)
        norm *= 2.0;
    return total / norm;
}

// |det| by Gaussian elimination with partial pivoting.
double abs_determinant(std::vector<Vec> m)
{
    const std::size_t dim = m.size();
    double det = 1.0;
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        if (m[piv][col] == 0.0)
            return 0.0;
        if (piv != col)
            std::swap(m[piv], m[col]);
        det *= m[col][col];
        for (std::size_t r = col + 1; r < dim; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t cc = col; cc < dim; ++cc)
                m[r][cc] -= f * m[col][cc];
        }
    }
    return std::abs(det);
}

// Bordered antisymmetric matrix B = [[0, eta], [-eta^T, omega]]; its
// Pfaffian equals the wedge coefficient divided by n!, so
// |c| = n! * sqrt(|det B|).
double pfaffian_fallback(const FormComponents& c, int n)
{
    const int dim = 2 * n + 1;
    std::vector<Vec> b(dim + 1, Vec(dim + 1, 0.0));
    for (int j = 0; j < dim; ++j) {
        b[0][j + 1] = c.eta[j];
        b[j + 1][0] = -c.eta[j];
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            b[i + 1][j + 1] = c.omega[i][j];
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k)
        factorial *= k;
    return factorial * std::sqrt(abs_determinant(std::move(b)));
}

} // namespace

double volume_form_coefficient(const PhasePoint& x)
{
    const int n = x.n();
    if (n < 1 || x.p.size() != x.q.size())
        throw std::invalid_argument("volume_form_coefficient: invalid point");
    const FormComponents c = assemble_components(x);
    if (n <= 4)
        return wedge_expansion(c, n);
    return pfaffian_fallback(c, n);
}

TangentVector contact_vector_field(const ContactHamiltonian& h, const PhasePoint& x)
{
    const HamiltonianGradient g = h.gradient(x);
    const int n = x.n();
    if (static_cast<int>(g.dh_dq.size()) != n || static_cast<int>(g.dh_dp.size()) != n)
        throw std::runtime_error("contact_vector_field: gradient dimension mismatch for " + h.name);
    TangentVector v;
    v.dq = g.dh_dp;
    v.dp.resize(n);
    double p_dot_hp = 0.0;
    for (int i = 0; i < n; ++i) {
        p_dot_hp += x.p[i] * g.dh_dp[i];
        v.dp[i] = -(x.p[i] * g.dh_ds + g.dh_dq[i]);
    }
    v.ds = p_dot_hp - h.value(x);
    return v;
}

std::pair<double, double> reeb_defect(const ContactHamiltonian& h, const PhasePoint& x)
{
    const TangentVector xh = contact_vector_field(h, x);
    const double field_defect = contact_form_apply(x, xh) + h.value(x);
    TangentVector reeb;
    reeb.ds = 1.0;
    reeb.dq.assign(x.q.size(), 0.0);
    reeb.dp.assign(x.p.size(), 0.0);
    const double reeb_defect_value = contact_form_apply(x, reeb) - 1.0;
    return {field_defect, reeb_defect_value};
}

} // namespace contactflow
