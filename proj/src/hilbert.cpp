#include "stapghz/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stap::hilbert {

namespace {

constexpr std::array<Level, 3> kAtom1{Level::f, Level::gl, Level::e};
constexpr std::array<Level, 3> kAtom2{Level::gl, Level::gr, Level::e};
constexpr std::array<Level, 3> kAtom3{Level::f, Level::gr, Level::e};

int level_position(int atom, Level level) {
    const auto& set = levels_of(atom);
    auto it = std::find(set.begin(), set.end(), level);
    if (it == set.end()) {
        return -1;
    }
    return static_cast<int>(it - set.begin());
}

void check_atom(int atom) {
    if (atom < 1 || atom > 3) {
        throw std::domain_error("atom index must be 1, 2 or 3, got " + std::to_string(atom));
    }
}

SparseMatrix to_sparse(const Matrix& m) {
    SparseMatrix s = m.sparseView(Complex(0.0), 0.0);
    s.makeCompressed();
    return s;
}

// Builds the matrix of a map sending each basis state to (amplitude, image).
template <typename F>
Matrix basis_map(const StateSpace& space, F&& f) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t col = 0; col < space.dim(); ++col) {
        BasisState image = space.state(col);
        double amplitude = f(image);
        if (amplitude == 0.0) {
            continue;
        }
        m(static_cast<Eigen::Index>(space.index(image)), static_cast<Eigen::Index>(col)) +=
            amplitude;
    }
    return m;
}

} // namespace

std::string to_string(Level level) {
    switch (level) {
    case Level::f:
        return "f";
    case Level::gl:
        return "g_l";
    case Level::gr:
        return "g_r";
    case Level::e:
        return "e";
    }
    return "?";
}

const std::array<Level, 3>& levels_of(int atom) {
    check_atom(atom);
    switch (atom) {
    case 1:
        return kAtom1;
    case 2:
        return kAtom2;
    default:
        return kAtom3;
    }
}

bool atom_has_level(int atom, Level level) { return level_position(atom, level) >= 0; }

int BasisState::excitations() const {
    int n = n_left + n_right;
    for (Level l : atoms) {
        n += (l == Level::e) ? 1 : 0;
    }
    return n;
}

std::string to_string(const BasisState& state) {
    std::ostringstream os;
    os << '|' << to_string(state.atoms[0]) << ',' << to_string(state.atoms[1]) << ','
       << to_string(state.atoms[2]) << ">|" << state.n_left << ',' << state.n_right << '>';
    return os.str();
}

StateSpace::StateSpace(int n_max) : n_max_(n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1 (cavity couplings vanish at n_max = 0)");
    }
    const int photons = n_max + 1;
    states_.reserve(static_cast<std::size_t>(27 * photons * photons));
    for (Level a1 : kAtom1) {
        for (Level a2 : kAtom2) {
            for (Level a3 : kAtom3) {
                for (int nl = 0; nl < photons; ++nl) {
                    for (int nr = 0; nr < photons; ++nr) {
                        states_.push_back(BasisState{{a1, a2, a3}, nl, nr});
                    }
                }
            }
        }
    }
}

std::size_t StateSpace::encode(const BasisState& s) const {
    const auto photons = static_cast<std::size_t>(n_max_ + 1);
    std::size_t idx = 0;
    for (int atom = 1; atom <= 3; ++atom) {
        idx = idx * 3 + static_cast<std::size_t>(level_position(atom, s.atoms[atom - 1]));
    }
    idx = idx * photons + static_cast<std::size_t>(s.n_left);
    idx = idx * photons + static_cast<std::size_t>(s.n_right);
    return idx;
}

std::optional<std::size_t> StateSpace::find(const BasisState& s) const {
    for (int atom = 1; atom <= 3; ++atom) {
        if (level_position(atom, s.atoms[atom - 1]) < 0) {
            return std::nullopt;
        }
    }
    if (s.n_left < 0 || s.n_left > n_max_ || s.n_right < 0 || s.n_right > n_max_) {
        return std::nullopt;
    }
    return encode(s);
}

std::size_t StateSpace::index(const BasisState& s) const {
    auto idx = find(s);
    if (!idx) {
        throw std::out_of_range("state " + to_string(s) + " is not in the state space");
    }
    return *idx;
}

StateSpace enumerate_basis(int n_max) { return StateSpace(n_max); }

Ket Ket::basis(const StateSpace& space, const BasisState& state) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
    v(static_cast<Eigen::Index>(space.index(state))) = 1.0;
    return Ket(std::move(v));
}

DensityMatrix DensityMatrix::pure(const Ket& ket) {
    return DensityMatrix(ket.amplitudes * ket.amplitudes.adjoint());
}

double DensityMatrix::hermiticity_error() const { return max_abs(rho - rho.adjoint()); }

double DensityMatrix::min_eigenvalue() const {
    Matrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("density matrix must be square");
    }
    if (hermiticity_error() > 1e-10) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(trace() - Complex(1.0)) > 1e-8) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    if (min_eigenvalue() < -1e-8) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

Operator::Operator(Matrix m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("operator matrix must be square");
    }
    if (hermitian_ && max_abs(m_ - m_.adjoint()) >= 1e-12) {
        throw std::invalid_argument("operator flagged Hermitian but A != A^dagger");
    }
}

Operator Operator::zero(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Zero(d, d), true);
}

Operator Operator::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Identity(d, d), true);
}

Operator Operator::adjoint() const {
    Operator out;
    out.m_ = m_.adjoint();
    out.hermitian_ = hermitian_;
    return out;
}

Operator operator+(const Operator& a, const Operator& b) {
    Operator out;
    out.m_ = a.m_ + b.m_;
    out.hermitian_ = a.hermitian_ && b.hermitian_;
    return out;
}

Operator operator-(const Operator& a, const Operator& b) {
    Operator out;
    out.m_ = a.m_ - b.m_;
    out.hermitian_ = a.hermitian_ && b.hermitian_;
    return out;
}

Operator operator*(const Operator& a, const Operator& b) { return Operator(a.m_ * b.m_); }

Operator operator*(Complex s, const Operator& a) {
    Operator out;
    out.m_ = s * a.m_;
    out.hermitian_ = a.hermitian_ && s.imag() == 0.0;
    return out;
}

Operator operator*(double s, const Operator& a) { return Complex(s) * a; }

Vector operator*(const Operator& a, const Vector& v) {
    if (a.dim() != v.size()) {
        throw std::invalid_argument("operator/vector dimension mismatch");
    }
    return a.m_ * v;
}

Ket operator*(const Operator& a, const Ket& k) { return Ket(a * k.amplitudes); }

Operator commutator(const Operator& a, const Operator& b) {
    return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Operator annihilator(const StateSpace& space, Mode mode) {
    Matrix m = basis_map(space, [&](BasisState& s) {
        int& n = (mode == Mode::left) ? s.n_left : s.n_right;
        if (n == 0) {
            return 0.0;
        }
        double amp = std::sqrt(static_cast<double>(n));
        --n;
        return amp;
    });
    return Operator(std::move(m));
}

Operator atomic_transition(const StateSpace& space, int atom, Level from, Level to) {
    check_atom(atom);
    if (!atom_has_level(atom, from) || !atom_has_level(atom, to)) {
        throw std::domain_error("level not in the level set of atom " + std::to_string(atom));
    }
    Matrix m = basis_map(space, [&](BasisState& s) {
        Level& l = s.atoms[static_cast<std::size_t>(atom - 1)];
        if (l != from) {
            return 0.0;
        }
        l = to;
        return 1.0;
    });
    return Operator(std::move(m), from == to);
}

Operator excitation_number(const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        m(k, k) = static_cast<double>(space.state(i).excitations());
    }
    return Operator(std::move(m), true);
}

Complex expectation(const Operator& op, const Ket& state) {
    if (op.dim() != state.dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    return state.amplitudes.dot(op.matrix() * state.amplitudes);
}

Complex expectation(const Operator& op, const DensityMatrix& state) {
    if (op.dim() != state.dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    // tr(Aρ) without forming the product.
    return (op.matrix().transpose().cwiseProduct(state.rho)).sum();
}

void add_right_product(Matrix& out, const Matrix& in, const SparseMatrix& s, Complex c) {
    if (in.cols() != s.rows() || out.rows() != in.rows() || out.cols() != s.cols()) {
        throw std::invalid_argument("add_right_product: dimension mismatch");
    }
    for (Eigen::Index col = 0; col < s.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(s, col); it; ++it) {
            out.col(col) += (c * it.value()) * in.col(it.row());
        }
    }
}

TimeDependentOperator::TimeDependentOperator(Eigen::Index dim, double t_final)
    : dim_(dim), t_final_(t_final), static_(dim, dim) {
    if (dim <= 0) {
        throw std::invalid_argument("operator dimension must be positive");
    }
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("t_final must be positive");
    }
}

TimeDependentOperator TimeDependentOperator::from_function(Eigen::Index dim, double t_final,
                                                           DenseFunction f) {
    TimeDependentOperator op(dim, t_final);
    op.dense_.push_back(std::move(f));
    return op;
}

TimeDependentOperator& TimeDependentOperator::add_static(const Matrix& m) {
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw std::invalid_argument("add_static: dimension mismatch");
    }
    static_ += to_sparse(m);
    static_.makeCompressed();
    return *this;
}

TimeDependentOperator& TimeDependentOperator::add_term(Coefficient c, const Matrix& m) {
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw std::invalid_argument("add_term: dimension mismatch");
    }
    terms_.push_back(Term{std::move(c), to_sparse(m)});
    return *this;
}

void TimeDependentOperator::check_time(double t) const {
    const double slack = 1e-9 * (1.0 + t_final_);
    if (t < -slack || t > t_final_ + slack) {
        throw std::domain_error("time " + std::to_string(t) + " outside [0, " +
                                std::to_string(t_final_) + "]");
    }
}

Matrix TimeDependentOperator::matrix(double t) const {
    check_time(t);
    Matrix m = Matrix(static_);
    for (const auto& term : terms_) {
        const Complex c = term.coefficient(t);
        if (c != Complex(0.0)) {
            m += c * Matrix(term.op);
        }
    }
    for (const auto& f : dense_) {
        m += f(t);
    }
    return m;
}

Operator TimeDependentOperator::at(double t) const { return Operator(matrix(t)); }

void TimeDependentOperator::apply_left(double t, const Matrix& in, Matrix& out) const {
    check_time(t);
    out.noalias() = static_ * in;
    for (const auto& term : terms_) {
        const Complex c = term.coefficient(t);
        if (c != Complex(0.0)) {
            out.noalias() += c * (term.op * in);
        }
    }
    for (const auto& f : dense_) {
        out.noalias() += f(t) * in;
    }
}

void TimeDependentOperator::apply_right(double t, const Matrix& in, Matrix& out) const {
    check_time(t);
    out.setZero(in.rows(), dim_);
    add_right_product(out, in, static_);
    for (const auto& term : terms_) {
        const Complex c = term.coefficient(t);
        if (c != Complex(0.0)) {
            add_right_product(out, in, term.op, c);
        }
    }
    for (const auto& f : dense_) {
        out.noalias() += in * f(t);
    }
}

TimeDependentOperator& TimeDependentOperator::operator+=(const TimeDependentOperator& other) {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("operator sum: dimension mismatch");
    }
    static_ += other.static_;
    static_.makeCompressed();
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    dense_.insert(dense_.end(), other.dense_.begin(), other.dense_.end());
    t_final_ = std::min(t_final_, other.t_final_);
    return *this;
}

} // namespace stap::hilbert
