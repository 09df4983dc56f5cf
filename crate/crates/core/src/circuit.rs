//! Gate-level circuits for hyperbit strategies.
//!
//! Each player holds `L = ceil(d/2)` qubits of a maximally entangled state.
//! A vector `c` of length `2L` selects the observable `sum_i c_i T_i` with
//! `T_{2i-1} = X_i Z_{i-1}...Z_1` and `T_{2i} = Y_i Z_{i-1}...Z_1`. The
//! measurement circuit rotates that observable onto `|c| X_1`: one RZ per
//! qubit folds `Y_j` into `X_j`, then a ladder of two-qubit rotations folds
//! `X_j Z_{j-1}` into `X_{j-1}` from the top qubit down, and finally `H` on
//! qubit 1 turns the `X_1` readout into a computational one.
//!
//! Qubits are 0-based here: qubit `j` above is index `j - 1`, Alice owns
//! `0..L` and Bob `L..2L`, and qubit 0 is the least significant bit of a
//! basis-state index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbit::HyperbitStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    S,
    #[serde(rename = "S_dagger")]
    SDagger,
    #[serde(rename = "CNOT")]
    Cnot,
    #[serde(rename = "RZ")]
    Rz,
}

/// One elementary gate. `RZ(a) = exp(-i a Z / 2)`; CNOT targets are
/// `[control, target]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    #[serde(rename = "g")]
    pub kind: GateKind,
    #[serde(rename = "q")]
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl Gate {
    pub fn h(q: usize) -> Gate {
        Gate { kind: GateKind::H, targets: vec![q], angle: None }
    }

    pub fn x(q: usize) -> Gate {
        Gate { kind: GateKind::X, targets: vec![q], angle: None }
    }

    pub fn s(q: usize) -> Gate {
        Gate { kind: GateKind::S, targets: vec![q], angle: None }
    }

    pub fn s_dagger(q: usize) -> Gate {
        Gate { kind: GateKind::SDagger, targets: vec![q], angle: None }
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate { kind: GateKind::Cnot, targets: vec![control, target], angle: None }
    }

    pub fn rz(q: usize, angle: f64) -> Gate {
        Gate { kind: GateKind::Rz, targets: vec![q], angle: Some(angle) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidGate(format!("{:?}: {msg}", self.kind)));
        match self.kind {
            GateKind::Cnot => {
                if self.targets.len() != 2 || self.targets[0] == self.targets[1] {
                    return bad("needs two distinct qubits");
                }
            }
            _ if self.targets.len() != 1 => return bad("needs exactly one qubit"),
            _ => {}
        }
        match (self.kind, self.angle) {
            (GateKind::Rz, Some(a)) if a.is_finite() => Ok(()),
            (GateKind::Rz, _) => bad("needs a finite angle"),
            (_, Some(_)) => bad("takes no angle"),
            (_, None) => Ok(()),
        }
    }

    fn shifted(mut self, offset: usize) -> Gate {
        self.targets.iter_mut().for_each(|q| *q += offset);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Alice,
    Bob,
}

/// Coefficients of a measurement observable in the `T_i` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementCoefficients {
    pub c: Vec<f64>,
}

impl MeasurementCoefficients {
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Norm slack accepted for hyperbit vectors.
pub const NORM_SLACK: f64 = 1e-9;

/// Bob measures `sum_i y_i T_i^T`; transposition flips every `Y`-type
/// operator, so his even coefficients change sign.
pub fn measurement_coefficients(v: &[f64], role: Role) -> Result<MeasurementCoefficients> {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 1.0 + NORM_SLACK {
        return Err(Error::NormTooLarge { norm });
    }
    let c = v
        .iter()
        .enumerate()
        .map(|(i, &a)| if role == Role::Bob && i % 2 == 1 { -a } else { a })
        .collect();
    Ok(MeasurementCoefficients { c })
}

/// Single-qubit angles `theta_j` (one per qubit) and ladder angles
/// `phi_j` for `j = 2..=L` (stored at index `j - 2`).
pub fn rotation_angles(c: &MeasurementCoefficients) -> (Vec<f64>, Vec<f64>) {
    let l = c.c.len().div_ceil(2);
    let mut padded = c.c.clone();
    padded.resize(2 * l, 0.0);
    let theta = (0..l).map(|j| padded[2 * j + 1].atan2(padded[2 * j])).collect();
    let radius: Vec<f64> = (0..l).map(|j| padded[2 * j].hypot(padded[2 * j + 1])).collect();
    let phi = (1..l)
        .map(|j| {
            let above = radius[j..].iter().map(|r| r * r).sum::<f64>().sqrt();
            above.atan2(radius[j - 1])
        })
        .collect();
    (theta, phi)
}

/// Gates rotating `sum_i c_i T_i` on qubits `0..L` onto `|c| Z_0` readout.
pub fn measurement_gates(c: &MeasurementCoefficients) -> Vec<Gate> {
    let (theta, phi) = rotation_angles(c);
    let l = theta.len();
    // RZ(a) X RZ(a)^dag = cos a X + sin a Y, so RZ(-theta) clears each Y
    let mut gates: Vec<Gate> = theta.iter().enumerate().map(|(j, &t)| Gate::rz(j, -t)).collect();
    // exp(-i phi X_j Y_{j-1} / 2) = U RZ_j(phi) U^dag with U = S_{j-1} CNOT_{j,j-1} H_j
    for j in (1..l).rev() {
        let p = phi[j - 1];
        gates.extend([
            Gate::s_dagger(j - 1),
            Gate::cnot(j, j - 1),
            Gate::h(j),
            Gate::rz(j, p),
            Gate::h(j),
            Gate::cnot(j, j - 1),
            Gate::s(j - 1),
        ]);
    }
    if l > 0 {
        gates.push(Gate::h(0));
    }
    gates
}

/// Entangled-state preparation plus one measurement circuit per private input.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub qubits_per_player: usize,
    pub prep: Vec<Gate>,
    /// Indexed by `s`; gates act on Alice's qubits `0..L`.
    pub alice: Vec<Vec<Gate>>,
    /// Indexed by `t`; `None` where Bob answers by default. Gates act on
    /// Bob's qubits `L..2L`.
    pub bob: Vec<Option<Vec<Gate>>>,
    /// Indexed by `t`; `Some(gamma_t)` where Bob ignores the hyperbit.
    pub defaults: Vec<Option<f64>>,
}

pub fn prep_gates(l: usize) -> Vec<Gate> {
    (0..l).map(Gate::h).chain((0..l).map(|i| Gate::cnot(i, l + i))).collect()
}

pub fn build_circuit(strategy: &HyperbitStrategy) -> Result<CircuitSpec> {
    let l = strategy.d.div_ceil(2);
    let alice = strategy
        .x
        .iter()
        .map(|x| Ok(measurement_gates(&measurement_coefficients(x, Role::Alice)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut bob = Vec::with_capacity(strategy.cols());
    let mut defaults = Vec::with_capacity(strategy.cols());
    for (g, y) in strategy.gamma.values().iter().zip(&strategy.y) {
        if *g == 0.0 {
            let gates = measurement_gates(&measurement_coefficients(y, Role::Bob)?);
            bob.push(Some(gates.into_iter().map(|gt| gt.shifted(l)).collect()));
            defaults.push(None);
        } else {
            bob.push(None);
            defaults.push(Some(*g));
        }
    }
    Ok(CircuitSpec {
        qubits_per_player: l,
        prep: prep_gates(l),
        alice,
        bob,
        defaults,
    })
}

pub const QUBIT_ORDER: &str = "qubit 0 is the least significant bit; Alice owns 0..L, Bob owns L..2L";

/// JSON form; map keys are row / column indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitJson {
    #[serde(default)]
    pub qubit_order: Option<String>,
    pub qubits_per_player: usize,
    pub prep: Vec<Gate>,
    pub alice: BTreeMap<usize, Vec<Gate>>,
    pub bob: BTreeMap<usize, Vec<Gate>>,
    pub defaults: BTreeMap<usize, f64>,
}

impl CircuitSpec {
    pub fn num_qubits(&self) -> usize {
        2 * self.qubits_per_player
    }

    pub fn to_json(&self) -> CircuitJson {
        CircuitJson {
            qubit_order: Some(QUBIT_ORDER.to_string()),
            qubits_per_player: self.qubits_per_player,
            prep: self.prep.clone(),
            alice: self.alice.iter().cloned().enumerate().collect(),
            bob: self
                .bob
                .iter()
                .enumerate()
                .filter_map(|(t, g)| g.clone().map(|g| (t, g)))
                .collect(),
            defaults: self
                .defaults
                .iter()
                .enumerate()
                .filter_map(|(t, g)| g.map(|g| (t, g)))
                .collect(),
        }
    }

    /// Rebuilds and validates a circuit from its JSON form.
    pub fn from_json(j: &CircuitJson) -> Result<CircuitSpec> {
        let l = j.qubits_per_player;
        let rows = j.alice.len();
        if j.alice.keys().copied().ne(0..rows) {
            return Err(Error::Schema("alice circuits must be keyed 0..M".into()));
        }
        let cols = j.bob.keys().chain(j.defaults.keys()).max().map_or(0, |&t| t + 1);
        let mut bob = vec![None; cols];
        let mut defaults = vec![None; cols];
        for (&t, g) in &j.bob {
            bob[t] = Some(g.clone());
        }
        for (&t, &g) in &j.defaults {
            if bob[t].is_some() {
                return Err(Error::Schema(format!("column {t} has both a circuit and a default")));
            }
            if g != 1.0 && g != -1.0 {
                return Err(Error::Schema(format!("default answer {g} for column {t} is not +-1")));
            }
            defaults[t] = Some(g);
        }
        if let Some(t) = (0..cols).find(|&t| bob[t].is_none() && defaults[t].is_none()) {
            return Err(Error::Schema(format!("column {t} has neither a circuit nor a default")));
        }
        let spec = CircuitSpec {
            qubits_per_player: l,
            prep: j.prep.clone(),
            alice: j.alice.values().cloned().collect(),
            bob,
            defaults,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks gate well-formedness, register ownership and adjacency.
    pub fn validate(&self) -> Result<()> {
        let l = self.qubits_per_player;
        let check = |gates: &[Gate], lo: usize, hi: usize| -> Result<()> {
            for g in gates {
                g.validate()?;
                if let Some(&q) = g.targets.iter().find(|&&q| q < lo || q >= hi) {
                    return Err(Error::QubitOutOfRange { qubit: q, num_qubits: hi });
                }
                if g.kind == GateKind::Cnot && g.targets[0].abs_diff(g.targets[1]) != 1 {
                    return Err(Error::InvalidGate(format!(
                        "CNOT between non-adjacent qubits {:?}",
                        g.targets
                    )));
                }
            }
            Ok(())
        };
        for g in &self.prep {
            g.validate()?;
            if let Some(&q) = g.targets.iter().find(|&&q| q >= 2 * l) {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: 2 * l });
            }
        }
        for a in &self.alice {
            check(a, 0, l)?;
        }
        for b in self.bob.iter().flatten() {
            check(b, l, 2 * l)?;
        }
        Ok(())
    }
}
