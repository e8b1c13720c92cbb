#include "beamq/spin.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace beamq::spin {

namespace {

using Complex = std::complex<double>;

void check_blocks(const std::vector<SpinBlock>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("spin: block list must be nonempty");
  for (const auto& b : blocks) {
    if (b.photon_number < 1) throw std::invalid_argument("spin: photon_number must be >= 1");
    if (!(b.lambda > 0.0)) throw std::invalid_argument("spin: lambda must be positive");
  }
}

long long total_dimension(const std::vector<SpinBlock>& blocks) {
  long long dim = 1;
  for (const auto& b : blocks) {
    dim *= b.photon_number + 1;
    if (dim > 100'000'000LL) break;
  }
  return dim;
}

// Raising-operator amplitudes <m+1| J_+ |m> with the basis ordered from
// m = +j down to -j.
Eigen::MatrixXd build_jplus(int n_photons) {
  const int dim = n_photons + 1;
  const double j = 0.5 * n_photons;
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 1; i < dim; ++i) {
    const double m = j - i;
    jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return jp;
}

// exp(-i (pi/2) S_x) through the exact eigen-decomposition of S_x.
Eigen::MatrixXcd half_pi_x_rotation(int n_photons) {
  const Eigen::MatrixXcd sx = build_sx(n_photons);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sx.real());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spin: S_x eigen-decomposition failed", 0.0);
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::VectorXcd phases(solver.eigenvalues().size());
  for (int i = 0; i < phases.size(); ++i) {
    phases[i] = std::exp(Complex(0.0, -0.5 * M_PI * solver.eigenvalues()[i]));
  }
  return v.cast<Complex>() * phases.asDiagonal() * v.transpose().cast<Complex>();
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a[i] * b;
  }
  return out;
}

// out += coeff * (op acting on tensor axis `axis`) psi
void accumulate_block_apply(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& op,
                            const std::vector<int>& dims, int axis, double coeff,
                            Eigen::VectorXcd& out) {
  long long left = 1, right = 1;
  for (int i = 0; i < axis; ++i) left *= dims[i];
  for (std::size_t i = axis + 1; i < dims.size(); ++i) right *= dims[i];
  const int d = dims[axis];

  Eigen::VectorXcd slice(d), mapped(d);
  for (long long l = 0; l < left; ++l) {
    for (long long r = 0; r < right; ++r) {
      const long long base = l * d * right + r;
      for (int i = 0; i < d; ++i) slice[i] = psi[base + i * right];
      mapped.noalias() = op * slice;
      for (int i = 0; i < d; ++i) out[base + i * right] += coeff * mapped[i];
    }
  }
}

Eigen::VectorXcd apply_hamiltonian(const Eigen::VectorXcd& psi,
                                   const std::vector<SpinBlock>& blocks) {
  std::vector<int> dims;
  dims.reserve(blocks.size());
  for (const auto& b : blocks) dims.push_back(b.photon_number + 1);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    accumulate_block_apply(psi, build_sy(blocks[k].photon_number), dims, static_cast<int>(k),
                           2.0 * blocks[k].lambda, out);
  }
  return out;
}

void fix_global_phase(Eigen::VectorXcd& state) {
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (std::abs(state[i]) > 1e-12) {
      const Complex phase = state[i] / std::abs(state[i]);
      state /= phase;
      return;
    }
  }
}

}  // namespace

Eigen::MatrixXcd build_sy(int n_photons) {
  if (n_photons < 1) throw std::invalid_argument("build_sy: n_photons must be >= 1");
  const Eigen::MatrixXd jp = build_jplus(n_photons);
  const Eigen::MatrixXd diff = jp - jp.transpose();
  return diff.cast<Complex>() * Complex(0.0, -0.5);  // (J+ - J-) / 2i
}

Eigen::MatrixXcd build_sx(int n_photons) {
  if (n_photons < 1) throw std::invalid_argument("build_sx: n_photons must be >= 1");
  const Eigen::MatrixXd jp = build_jplus(n_photons);
  return ((jp + jp.transpose()) * 0.5).cast<Complex>();
}

double variance_bound(const std::vector<SpinBlock>& blocks) {
  check_blocks(blocks);
  double bound = 0.0;
  for (const auto& b : blocks) bound += b.lambda * b.photon_number;
  return bound;
}

OptimalProbe optimal_probe(const std::vector<SpinBlock>& blocks) {
  check_blocks(blocks);
  if (total_dimension(blocks) > 1'000'000LL) {
    throw CapacityError("optimal_probe: tensor dimension exceeds 10^6");
  }

  OptimalProbe probe;
  Eigen::VectorXcd plus = Eigen::VectorXcd::Ones(1);
  Eigen::VectorXcd minus = Eigen::VectorXcd::Ones(1);
  for (const auto& b : blocks) {
    const int dim = b.photon_number + 1;
    const Eigen::MatrixXcd rot = half_pi_x_rotation(b.photon_number);
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd bottom = Eigen::VectorXcd::Zero(dim);
    top[0] = 1.0;
    bottom[dim - 1] = 1.0;

    BlockState up{rot * top};
    BlockState down{rot * bottom};
    plus = kron(plus, up.amplitudes);
    minus = kron(minus, down.amplitudes);
    probe.plus_blocks.push_back(std::move(up));
    probe.minus_blocks.push_back(std::move(down));
  }

  probe.state = (plus + minus) / std::sqrt(2.0);
  probe.state /= probe.state.norm();
  fix_global_phase(probe.state);
  return probe;
}

Moments variance_of(const Eigen::VectorXcd& state, const std::vector<SpinBlock>& blocks) {
  check_blocks(blocks);
  if (state.size() != total_dimension(blocks)) {
    throw std::invalid_argument("variance_of: state size does not match blocks");
  }
  if (std::abs(state.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("variance_of: state is not normalized");
  }

  const Eigen::VectorXcd h_psi = apply_hamiltonian(state, blocks);
  Moments m;
  m.mean = state.dot(h_psi).real();
  m.variance = h_psi.squaredNorm() - m.mean * m.mean;
  return m;
}

Eigen::VectorXcd top_state(const std::vector<SpinBlock>& blocks) {
  check_blocks(blocks);
  const long long dim = total_dimension(blocks);
  if (dim > 100'000'000LL) throw CapacityError("top_state: tensor dimension too large");
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
  state[0] = 1.0;
  return state;
}

Eigen::VectorXcd random_state(const std::vector<SpinBlock>& blocks, std::uint64_t seed) {
  check_blocks(blocks);
  const long long dim = total_dimension(blocks);
  if (dim > 10'000'000LL) throw CapacityError("random_state: tensor dimension too large");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd state(dim);
  for (long long i = 0; i < dim; ++i) state[i] = Complex(gauss(rng), gauss(rng));
  state /= state.norm();
  return state;
}

}  // namespace beamq::spin
