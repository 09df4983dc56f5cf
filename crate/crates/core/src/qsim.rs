//! Dense statevector simulation of hyperbit circuits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_circuit, CircuitSpec, Gate, GateKind};
use crate::error::{Error, Result};
use crate::game::{GameMatrix, StrategyMatrix};
use crate::hyperbit::HyperbitStrategy;

/// Largest hyperbit dimension simulated densely.
pub const MAX_DIMENSION: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        StateVector { amplitudes, num_qubits }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len();
        if !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{n} amplitudes is not a power of two")));
        }
        Ok(StateVector { amplitudes, num_qubits: n.trailing_zeros() as usize })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    fn check(&self, q: usize) -> Result<usize> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
        }
        Ok(1 << q)
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2]) -> Result<()> {
        let bit = self.check(q)?;
        for i in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
            let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[i | bit] = m[1][0] * a + m[1][1] * b;
        }
        Ok(())
    }

    fn diagonal(&mut self, q: usize, d0: Complex64, d1: Complex64) -> Result<()> {
        let bit = self.check(q)?;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & bit == 0 { d0 } else { d1 };
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate()?;
        let q = gate.targets[0];
        match gate.kind {
            GateKind::H => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.single(q, [[h, h], [h, -h]])
            }
            GateKind::X => self.single(q, [[ZERO, ONE], [ONE, ZERO]]),
            GateKind::S => self.diagonal(q, ONE, I),
            GateKind::SDagger => self.diagonal(q, ONE, -I),
            GateKind::Rz => {
                let half = 0.5 * gate.angle.expect("validated");
                self.diagonal(q, Complex64::from_polar(1.0, -half), Complex64::from_polar(1.0, half))
            }
            GateKind::Cnot => {
                let control = self.check(q)?;
                let target = self.check(gate.targets[1])?;
                for i in 0..self.amplitudes.len() {
                    if i & control != 0 && i & target == 0 {
                        self.amplitudes.swap(i, i | target);
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    /// `<Z_a Z_b>`, the expected product of two computational readouts
    /// mapped to `+-1`.
    pub fn zz_expectation(&self, a: usize, b: usize) -> Result<f64> {
        let (ma, mb) = (self.check(a)?, self.check(b)?);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, amp)| {
                let parity = ((i & ma != 0) as u8) ^ ((i & mb != 0) as u8);
                if parity == 0 {
                    amp.norm_sqr()
                } else {
                    -amp.norm_sqr()
                }
            })
            .sum())
    }

    /// `<psi| op |psi>` for an operator acting on qubits `offset..offset+k`.
    pub fn local_expectation(&self, op: &DMatrix<Complex64>, offset: usize) -> Result<Complex64> {
        let applied = self.apply_local(op, offset)?;
        Ok(self.amplitudes.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum())
    }

    fn apply_local(&self, op: &DMatrix<Complex64>, offset: usize) -> Result<Vec<Complex64>> {
        let k = op.nrows().trailing_zeros() as usize;
        if offset + k > self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit: offset + k - 1, num_qubits: self.num_qubits });
        }
        let mask = ((1usize << k) - 1) << offset;
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let col = (i & mask) >> offset;
            let rest = i & !mask;
            for row in 0..op.nrows() {
                let v = op[(row, col)];
                if v != ZERO {
                    out[rest | (row << offset)] += v * a;
                }
            }
        }
        Ok(out)
    }
}

pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut next = state.clone();
    next.apply(gate)?;
    Ok(next)
}

/// Prepares `2^{-L/2} sum_i |i>_A |i>_B` by running `spec.prep`.
pub fn prepared_state(spec: &CircuitSpec) -> Result<StateVector> {
    let mut state = StateVector::zero(spec.num_qubits());
    state.apply_all(&spec.prep)?;
    Ok(state)
}

/// Dense `2^L x 2^L` matrix of `T_i` (0-based `i`): `X` or `Y` on qubit
/// `i / 2` behind a string of `Z` on all lower qubits.
pub fn t_operator(i: usize, l: usize) -> DMatrix<Complex64> {
    let q = i / 2;
    let y_type = i % 2 == 1;
    let dim = 1 << l;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for k in 0..dim {
        let lower_parity = (k & ((1 << q) - 1)).count_ones() % 2;
        let bit = (k >> q) & 1;
        let mut phase = if lower_parity == 1 { -ONE } else { ONE };
        if y_type {
            // Y|0> = i|1>, Y|1> = -i|0>
            phase *= if bit == 0 { I } else { -I };
        }
        m[(k ^ (1 << q), k)] = phase;
    }
    m
}

/// `sum_i v_i T_i`, or `sum_i v_i T_i^T` when `transpose` is set.
pub fn observable(v: &[f64], l: usize, transpose: bool) -> DMatrix<Complex64> {
    let dim = 1 << l;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (i, &c) in v.iter().enumerate() {
        if c != 0.0 {
            let t = t_operator(i, l);
            let t = if transpose { t.transpose() } else { t };
            m += t * Complex64::new(c, 0.0);
        }
    }
    m
}

/// Unitary of a gate list on `n` qubits, built column by column.
pub fn circuit_unitary(gates: &[Gate], n: usize) -> Result<DMatrix<Complex64>> {
    let dim = 1 << n;
    let mut u = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let mut amps = vec![ZERO; dim];
        amps[col] = ONE;
        let mut st = StateVector { amplitudes: amps, num_qubits: n };
        st.apply_all(gates)?;
        for (row, a) in st.amplitudes.into_iter().enumerate() {
            u[(row, col)] = a;
        }
    }
    Ok(u)
}

fn check_dimension(d: usize) -> Result<()> {
    if d > MAX_DIMENSION {
        return Err(Error::DimensionCap { dim: d, cap: MAX_DIMENSION });
    }
    Ok(())
}

/// `<Psi| A_s (x) B_t |Psi>` from the dense operators, which should equal
/// `x_s . y_t`.
pub fn expectation_ab(strategy: &HyperbitStrategy, s: usize, t: usize) -> Result<f64> {
    check_dimension(strategy.d)?;
    if strategy.gamma.values()[t] != 0.0 {
        return Err(Error::DefaultColumn(t));
    }
    let l = strategy.d.div_ceil(2);
    let state = prepared_state(&build_circuit(strategy)?)?;
    let a = observable(&strategy.x[s], l, false);
    let b = observable(&strategy.y[t], l, true);
    // A (x) B = (A (x) 1)(1 (x) B)
    let after_b = StateVector { amplitudes: state.apply_local(&b, l)?, num_qubits: 2 * l };
    let after_ab = after_b.apply_local(&a, 0)?;
    let value: Complex64 = state.amplitudes.iter().zip(&after_ab).map(|(p, q)| p.conj() * q).sum();
    Ok(value.re)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryCheck {
    pub s: usize,
    pub t: usize,
    /// `"hyperbit"` or `"default"`.
    pub kind: String,
    pub expected: f64,
    pub simulated: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<EntryCheck>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Game value of the simulated strategy matrix, when a game was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulated_value: Option<f64>,
}

impl VerificationReport {
    /// Simulated `S_st`: the default answer or the measured correlation.
    pub fn strategy_matrix(&self, rows: usize, cols: usize) -> Result<StrategyMatrix> {
        let mut v = vec![0.0; rows * cols];
        for e in &self.entries {
            v[e.s * cols + e.t] = e.simulated.clamp(-1.0, 1.0);
        }
        StrategyMatrix::from_flat(rows, cols, v)
    }
}

/// Runs every (s, t) pair through the circuit and compares the readout
/// correlation with the strategy. The deviation never raises an error; it
/// only fails the report.
pub fn verify_strategy(
    strategy: &HyperbitStrategy,
    circuit: &CircuitSpec,
    tol: f64,
) -> Result<VerificationReport> {
    check_dimension(strategy.d)?;
    circuit.validate()?;
    let (m, n) = (strategy.rows(), strategy.cols());
    if circuit.alice.len() != m || circuit.bob.len() != n {
        return Err(Error::DimensionMismatch {
            left: "strategy",
            left_rows: m,
            left_cols: n,
            right: "circuit",
            right_rows: circuit.alice.len(),
            right_cols: circuit.bob.len(),
        });
    }
    let l = circuit.qubits_per_player;
    let prep = prepared_state(circuit)?;
    let mut entries = Vec::with_capacity(m * n);
    for s in 0..m {
        let mut alice_state = prep.clone();
        alice_state.apply_all(&circuit.alice[s])?;
        let x_norm = strategy.x[s].iter().map(|v| v * v).sum::<f64>().sqrt();
        for t in 0..n {
            let gamma = strategy.gamma.values()[t];
            let (kind, expected, simulated) = match (&circuit.bob[t], circuit.defaults[t]) {
                (Some(gates), _) => {
                    let mut st = alice_state.clone();
                    st.apply_all(gates)?;
                    let y_norm = strategy.y[t].iter().map(|v| v * v).sum::<f64>().sqrt();
                    let corr = x_norm * y_norm * st.zz_expectation(0, l)?;
                    ("hyperbit", gamma + strategy.correlation(s, t), gamma + corr)
                }
                (None, Some(default)) => ("default", gamma, default),
                (None, None) => return Err(Error::Schema(format!("column {t} has no circuit or default"))),
            };
            entries.push(EntryCheck {
                s,
                t,
                kind: kind.to_string(),
                expected,
                simulated,
                deviation: (expected - simulated).abs(),
            });
        }
    }
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
    Ok(VerificationReport {
        entries,
        max_deviation,
        tolerance: tol,
        pass: max_deviation <= tol,
        simulated_value: None,
    })
}

/// [`verify_strategy`] plus the game value of the simulated strategy.
pub fn verify_on_game(
    c: &GameMatrix,
    strategy: &HyperbitStrategy,
    circuit: &CircuitSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = verify_strategy(strategy, circuit, tol)?;
    let s = report.strategy_matrix(strategy.rows(), strategy.cols())?;
    report.simulated_value = Some(crate::game::game_value(c, &s)?);
    Ok(report)
}

/// Estimates `<Z_a Z_b>` from `shots` seeded samples of the full register.
pub fn sample_zz(state: &StateVector, a: usize, b: usize, shots: usize, seed: u64) -> Result<f64> {
    let (ma, mb) = (state.check(a)?, state.check(b)?);
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let weights: Vec<f64> = state.amplitudes.iter().map(Complex64::norm_sqr).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: i64 = (0..shots)
        .map(|_| {
            let i = dist.sample(&mut rng);
            if ((i & ma != 0) as u8) ^ ((i & mb != 0) as u8) == 0 {
                1
            } else {
                -1
            }
        })
        .sum();
    Ok(total as f64 / shots as f64)
}
