/*
 Copyright 2026 The oogrisk Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "oogrisk/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oogrisk/error.hpp"

namespace oogrisk {

namespace {

std::string shape(Eigen::Index r, Eigen::Index c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
    if (m.rows() != rows || m.cols() != cols) {
        throw ValidationError(where, "expected " + shape(rows, cols) + ", got " + shape(m.rows(), m.cols()));
    }
}

void require_finite(const Matrix& m, const std::string& where) {
    if (!m.allFinite()) throw ValidationError(where, "contains non-finite entries");
}

}  // namespace

void StateSpace::validate(const std::string& name) const {
    const auto n = A.rows();
    require_shape(A, n, n, name + ".A");
    require_shape(B, n, B.cols(), name + ".B");
    require_shape(C, C.rows(), n, name + ".C");
    require_shape(D, C.rows(), B.cols(), name + ".D");
}

void PlantModel::validate() const {
    const auto n = A.rows();
    require_shape(A, n, n, "plant.A");
    require_shape(B, n, B.cols(), "plant.B");
    require_shape(C, C.rows(), n, "plant.C");
    require_shape(C_J, C_J.rows(), n, "plant.C_J");
    require_shape(D_J, C_J.rows(), B.cols(), "plant.D_J");
    for (const auto& [m, name] :
         {std::pair{&A, "plant.A"}, {&B, "plant.B"}, {&C, "plant.C"}, {&C_J, "plant.C_J"}, {&D_J, "plant.D_J"}}) {
        require_finite(*m, name);
    }
}

ControllerModel ControllerModel::static_gain(const Matrix& D_c) {
    return {Matrix(0, 0), Matrix(0, D_c.cols()), Matrix(D_c.rows(), 0), D_c};
}

void ControllerModel::validate(const PlantModel& plant) const {
    const auto nz_ = A_c.rows();
    require_shape(A_c, nz_, nz_, "controller.A_c");
    require_shape(B_c, nz_, plant.nm(), "controller.B_c");
    require_shape(C_c, plant.nu(), nz_, "controller.C_c");
    require_shape(D_c, plant.nu(), plant.nm(), "controller.D_c");
}

void DetectorModel::validate(const PlantModel& plant) const {
    const auto ns_ = A_e.rows();
    const auto nr_ = E_e.rows();
    require_shape(A_e, ns_, ns_, "detector.A_e");
    require_shape(B_e, ns_, plant.nu(), "detector.B_e");
    require_shape(K_e, ns_, plant.nm(), "detector.K_e");
    require_shape(C_e, nr_, ns_, "detector.C_e");
    require_shape(D_e, nr_, plant.nu(), "detector.D_e");
    require_shape(E_e, nr_, plant.nm(), "detector.E_e");
}

const char* to_string(AttackMode mode) noexcept {
    return mode == AttackMode::actuator ? "actuator" : "sensor";
}

AttackMode attack_mode_from_string(const std::string& text) {
    if (text == "actuator") return AttackMode::actuator;
    if (text == "sensor") return AttackMode::sensor;
    throw ValidationError("attack.mode", "expected 'actuator' or 'sensor', got '" + text + "'");
}

AttackSelection::AttackSelection(AttackMode mode, std::vector<int> channels, Eigen::Index n_u, Eigen::Index n_m)
    : mode_(mode), channels_(std::move(channels)), n_u_(n_u), n_m_(n_m) {
    std::sort(channels_.begin(), channels_.end());
    if (std::adjacent_find(channels_.begin(), channels_.end()) != channels_.end()) {
        throw ValidationError("attack.channels", "duplicate channel");
    }
    const auto limit = interface_size();
    for (int c : channels_) {
        if (c < 0 || c >= limit) {
            throw ValidationError("attack.channels", "channel index " + std::to_string(c) + " outside [0, " +
                                                         std::to_string(limit) + ")");
        }
    }
}

Eigen::Index AttackSelection::interface_size() const {
    return mode_ == AttackMode::actuator ? n_u_ : n_m_;
}

Matrix AttackSelection::E_a() const {
    Matrix e = Matrix::Zero(n_u_, n_u_);
    if (mode_ == AttackMode::actuator) {
        for (int c : channels_) e(c, c) = 1.0;
    }
    return e;
}

Matrix AttackSelection::F_a() const {
    Matrix f = Matrix::Zero(n_m_, n_m_);
    if (mode_ == AttackMode::sensor) {
        for (int c : channels_) f(c, c) = 1.0;
    }
    return f;
}

Matrix AttackSelection::B_a() const {
    Matrix b = Matrix::Zero(n_u_, n_a());
    if (mode_ == AttackMode::actuator) {
        for (Eigen::Index j = 0; j < n_a(); ++j) b(channels_[j], j) = 1.0;
    }
    return b;
}

Matrix AttackSelection::D_a() const {
    Matrix d = Matrix::Zero(n_m_, n_a());
    if (mode_ == AttackMode::sensor) {
        for (Eigen::Index j = 0; j < n_a(); ++j) d(channels_[j], j) = 1.0;
    }
    return d;
}

std::string AttackSelection::label(int channel) const {
    return (mode_ == AttackMode::actuator ? "A" : "S") + std::to_string(channel + 1);
}

int AttackSelection::channel_from_label(const std::string& text) const {
    const char prefix = mode_ == AttackMode::actuator ? 'A' : 'S';
    if (text.size() < 2 || text[0] != prefix) {
        throw ValidationError("channel", "'" + text + "' is not a " + to_string(mode_) + " channel label");
    }
    int idx = 0;
    try {
        idx = std::stoi(text.substr(1)) - 1;
    } catch (const std::exception&) {
        throw ValidationError("channel", "'" + text + "' has no channel number");
    }
    if (idx < 0 || idx >= interface_size()) {
        throw ValidationError("channel", "'" + text + "' does not exist in the model");
    }
    return idx;
}

void SystemModel::validate() const {
    plant.validate();
    controller.validate(plant);
    detector.validate(plant);
    if (attack.n_u() != plant.nu() || attack.n_m() != plant.nm()) {
        throw ValidationError("attack", "selection built for a different plant interface");
    }
    if (!(residual_threshold > 0.0) || !std::isfinite(residual_threshold)) {
        throw ValidationError("residual_threshold", "must be positive and finite");
    }
}

void ClosedLoopSystem::validate() const {
    const auto n_ = A.rows();
    require_shape(A, n_, n_, "A_cl");
    require_shape(B, n_, B.cols(), "B_cl");
    require_shape(C_p, C_p.rows(), n_, "C_p");
    require_shape(D_p, C_p.rows(), B.cols(), "D_p");
    require_shape(C_r, C_r.rows(), n_, "C_r");
    require_shape(D_r, C_r.rows(), B.cols(), "D_r");
}

ClosedLoopSystem assemble_closed_loop(const PlantModel& plant, const ControllerModel& ctrl, const DetectorModel& det,
                                      const AttackSelection& atk, const Vector& delta) {
    plant.validate();
    ctrl.validate(plant);
    det.validate(plant);
    if (atk.n_u() != plant.nu() || atk.n_m() != plant.nm()) {
        throw ValidationError("attack", "selection built for a different plant interface");
    }

    const auto nx = plant.nx();
    const auto nz = ctrl.nz();
    const auto ns = det.ns();
    const auto n = nx + nz + ns;
    const auto na = atk.n_a();
    const Matrix Ba = atk.B_a();
    const Matrix Da = atk.D_a();

    const Matrix& A = plant.A;
    const Matrix& B = plant.B;
    const Matrix& C = plant.C;
    const Matrix detector_gain = det.B_e * ctrl.D_c + det.K_e;  // (B_e D_c + K_e)
    const Matrix residual_gain = det.D_e * ctrl.D_c + det.E_e;  // (D_e D_c + E_e)

    ClosedLoopSystem cl;
    cl.A = Matrix::Zero(n, n);
    cl.A.block(0, 0, nx, nx) = A + B * ctrl.D_c * C;
    cl.A.block(0, nx, nx, nz) = B * ctrl.C_c;
    cl.A.block(nx, 0, nz, nx) = ctrl.B_c * C;
    cl.A.block(nx, nx, nz, nz) = ctrl.A_c;
    cl.A.block(nx + nz, 0, ns, nx) = detector_gain * C;
    cl.A.block(nx + nz, nx, ns, nz) = det.B_e * ctrl.C_c;
    cl.A.block(nx + nz, nx + nz, ns, ns) = det.A_e;

    cl.B = Matrix::Zero(n, na);
    cl.B.block(0, 0, nx, na) = B * Ba + B * ctrl.D_c * Da;
    cl.B.block(nx, 0, nz, na) = ctrl.B_c * Da;
    cl.B.block(nx + nz, 0, ns, na) = detector_gain * Da;

    cl.C_p = Matrix::Zero(plant.np(), n);
    cl.C_p.block(0, 0, plant.np(), nx) = plant.C_J + plant.D_J * ctrl.D_c * C;
    cl.C_p.block(0, nx, plant.np(), nz) = plant.D_J * ctrl.C_c;
    cl.D_p = plant.D_J * (ctrl.D_c * Da + Ba);

    cl.C_r = Matrix::Zero(det.nr(), n);
    cl.C_r.block(0, 0, det.nr(), nx) = residual_gain * C;
    cl.C_r.block(0, nx, det.nr(), nz) = det.D_e * ctrl.C_c;
    cl.C_r.block(0, nx + nz, det.nr(), ns) = det.C_e;
    cl.D_r = residual_gain * Da;

    cl.delta = delta;
    return cl;
}

CMatrix transfer_eval(const StateSpace& ss, std::complex<double> z, double pole_tol) {
    ss.validate();
    const auto n = ss.states();
    if (n == 0) return ss.D.cast<std::complex<double>>();
    const CMatrix pencil = z * CMatrix::Identity(n, n) - ss.A.cast<std::complex<double>>();
    Eigen::JacobiSVD<CMatrix> svd(pencil);
    const double smin = svd.singularValues()(n - 1);
    const double scale = 1.0 + std::abs(z) + ss.A.norm();
    if (smin <= pole_tol * scale) {
        std::ostringstream os;
        os << "z = " << z << " is within tolerance of a pole (sigma_min = " << smin << ")";
        throw DomainError("transfer_eval", os.str());
    }
    const CMatrix resolvent_b = pencil.partialPivLu().solve(ss.B.cast<std::complex<double>>());
    return ss.C.cast<std::complex<double>>() * resolvent_b + ss.D.cast<std::complex<double>>();
}

CMatrix transfer_eval(const ClosedLoopSystem& sys, std::complex<double> z, OutputChannel output, double pole_tol) {
    return transfer_eval(output == OutputChannel::performance ? sys.performance() : sys.residual(), z, pole_tol);
}

SimulationResult simulate(const ClosedLoopSystem& sys, const Matrix& attack, Eigen::Index horizon) {
    sys.validate();
    if (attack.rows() != sys.n_a() && attack.cols() > 0) {
        throw ValidationError("attack", "expected " + std::to_string(sys.n_a()) + " rows, got " +
                                            std::to_string(attack.rows()));
    }
    if (horizon < 0 || horizon + 1 < attack.cols()) {
        throw ValidationError("horizon", "horizon must cover the attack window");
    }
    const auto n = sys.n();
    const auto steps = horizon + 1;

    SimulationResult out;
    out.y_p = Matrix::Zero(sys.n_p(), steps);
    out.y_r = Matrix::Zero(sys.n_r(), steps);
    out.x = Matrix::Zero(n, steps + 1);

    Vector a = Vector::Zero(sys.n_a());
    double peak_during_attack = 0.0;
    for (Eigen::Index k = 0; k < steps; ++k) {
        const bool active = k < attack.cols();
        if (active) {
            a = attack.col(k);
        } else {
            a.setZero();
        }
        const Vector xk = out.x.col(k);
        out.y_p.col(k) = sys.C_p * xk + sys.D_p * a;
        out.y_r.col(k) = sys.C_r * xk + sys.D_r * a;
        out.x.col(k + 1) = sys.A * xk + sys.B * a;
        if (k <= attack.cols()) peak_during_attack = std::max(peak_during_attack, xk.norm());
    }
    out.performance_energy = out.y_p.squaredNorm();
    out.residual_energy = out.y_r.squaredNorm();
    out.terminal_norm = out.x.col(steps).norm();
    out.diverging = out.terminal_norm > std::max(peak_during_attack, 1e-300) && out.terminal_norm > 1e-12;
    return out;
}

double spectral_radius(const Matrix& A) {
    if (A.rows() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(A, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

AssumptionReport check_assumptions(const ClosedLoopSystem& sys, double rank_tol) {
    sys.validate();
    AssumptionReport rep;
    rep.spectral_radius = spectral_radius(sys.A);
    rep.schur_stable = rep.spectral_radius < 1.0;
    if (sys.n_a() == 0) {
        rep.b_cl_rank = 0;
        rep.b_cl_full_rank = true;
        return rep;
    }
    Eigen::JacobiSVD<Matrix> svd(sys.B);
    const auto& sv = svd.singularValues();
    const double thresh = rank_tol * std::max<double>(1.0, sv.size() ? sv(0) : 0.0);
    rep.b_cl_rank = (sv.array() > thresh).count();
    rep.b_cl_full_rank = rep.b_cl_rank == sys.n_a();
    return rep;
}

}  // namespace oogrisk
