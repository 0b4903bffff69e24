// Product basis of three three-level atoms and a two-mode cavity,
// plus the dense complex operator types shared by every other module.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

// Raised when an integrator or reduction leaves its numerical tolerance band.
class NumericalToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace stap

namespace stap::hilbert {

enum class Level { f, gl, gr, e };
enum class Mode { left, right };

std::string to_string(Level level);

// Atom 1: {f, g_l, e}; atom 2: {g_l, g_r, e}; atom 3: {f, g_r, e}.
const std::array<Level, 3>& levels_of(int atom);
bool atom_has_level(int atom, Level level);

struct BasisState {
    std::array<Level, 3> atoms{Level::f, Level::gl, Level::gr};
    int n_left{0};
    int n_right{0};

    // Number of excitations: excited atoms plus photons.
    int excitations() const;

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

std::string to_string(const BasisState& state);

class StateSpace {
public:
    explicit StateSpace(int n_max);

    int n_max() const noexcept { return n_max_; }
    std::size_t dim() const noexcept { return states_.size(); }
    const BasisState& state(std::size_t index) const { return states_.at(index); }
    const std::vector<BasisState>& states() const noexcept { return states_; }

    std::optional<std::size_t> find(const BasisState& state) const;
    // Throws std::out_of_range when the state is not part of the space.
    std::size_t index(const BasisState& state) const;

private:
    std::size_t encode(const BasisState& state) const;

    int n_max_;
    std::vector<BasisState> states_;
};

// Lexicographic enumeration over (atom1, atom2, atom3, n_l, n_r).
StateSpace enumerate_basis(int n_max);

struct Ket {
    Vector amplitudes;

    Ket() = default;
    explicit Ket(Vector v) : amplitudes(std::move(v)) {}

    static Ket basis(const StateSpace& space, const BasisState& state);

    Eigen::Index dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
    Ket normalized() const { return Ket(amplitudes.normalized()); }
};

struct DensityMatrix {
    Matrix rho;

    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m) : rho(std::move(m)) {}

    static DensityMatrix pure(const Ket& ket);

    Eigen::Index dim() const { return rho.rows(); }
    Complex trace() const { return rho.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;

    // Checks ρ = ρ† (1e-10), tr ρ = 1 (1e-8) and ρ ≥ −1e-8.
    void validate() const;
};

class Operator {
public:
    Operator() = default;
    explicit Operator(Matrix m, bool hermitian = false);

    static Operator zero(std::size_t dim);
    static Operator identity(std::size_t dim);

    const Matrix& matrix() const noexcept { return m_; }
    bool hermitian() const noexcept { return hermitian_; }
    Eigen::Index dim() const { return m_.rows(); }

    Operator adjoint() const;
    Complex operator()(Eigen::Index row, Eigen::Index col) const { return m_(row, col); }

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex s, const Operator& a);
    friend Operator operator*(double s, const Operator& a);
    friend Vector operator*(const Operator& a, const Vector& v);
    friend Ket operator*(const Operator& a, const Ket& k);

private:
    Matrix m_;
    bool hermitian_{false};
};

Operator commutator(const Operator& a, const Operator& b);
double max_abs(const Matrix& m);

// out += c · in · s, one column axpy per stored entry of s.
void add_right_product(Matrix& out, const Matrix& in, const SparseMatrix& s,
                       Complex c = Complex(1.0));

Operator annihilator(const StateSpace& space, Mode mode);
// |to⟩⟨from| on one atom (1-based), identity on the rest.
Operator atomic_transition(const StateSpace& space, int atom, Level from, Level to);
// Σ_atoms |e⟩⟨e| + a_l†a_l + a_r†a_r.
Operator excitation_number(const StateSpace& space);

Complex expectation(const Operator& op, const Ket& state);
Complex expectation(const Operator& op, const DensityMatrix& state);

// A map t ↦ H(t) on [0, t_final], held as a static part plus
// scalar-coefficient terms Σ c_k(t) A_k and an optional dense callable.
class TimeDependentOperator {
public:
    using Coefficient = std::function<Complex(double)>;
    using DenseFunction = std::function<Matrix(double)>;

    TimeDependentOperator(Eigen::Index dim, double t_final);

    static TimeDependentOperator from_function(Eigen::Index dim, double t_final,
                                               DenseFunction f);

    TimeDependentOperator& add_static(const Matrix& m);
    TimeDependentOperator& add_term(Coefficient c, const Matrix& m);

    Eigen::Index dim() const noexcept { return dim_; }
    double t_final() const noexcept { return t_final_; }

    Matrix matrix(double t) const;
    Operator at(double t) const;

    // out = H(t) in, for columns of `in` (kets or density matrices).
    void apply_left(double t, const Matrix& in, Matrix& out) const;
    // out = in H(t).
    void apply_right(double t, const Matrix& in, Matrix& out) const;

    TimeDependentOperator& operator+=(const TimeDependentOperator& other);
    friend TimeDependentOperator operator+(TimeDependentOperator a,
                                           const TimeDependentOperator& b) {
        a += b;
        return a;
    }

private:
    void check_time(double t) const;

    struct Term {
        Coefficient coefficient;
        SparseMatrix op;
    };

    Eigen::Index dim_;
    double t_final_;
    SparseMatrix static_;
    std::vector<Term> terms_;
    std::vector<DenseFunction> dense_;
};

} // namespace stap::hilbert
