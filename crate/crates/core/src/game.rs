//! Game model: coefficient matrices, strategy matrices, the value functional
//! and the sign-matrix reductions and transformations.
//!
//! A game is fully described by its coefficient matrix `C` (M x N): row `s`
//! is Alice's private information, column `t` is Bob's. A strategy in any
//! communication regime induces a strategy matrix `S` whose entries are the
//! expected value of Bob's ±1 answer, and the game value is `<C, S>`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `|S_st| <= 1` for strategy matrices produced by floating
/// point constructions (unit-vector inner products).
pub const STRATEGY_BOUND_SLACK: f64 = 1e-9;

/// Sign with `sgn(0) = +1`, the tie-break used for every strategy choice.
#[inline]
pub fn sign_or_plus(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Three-valued sign, `0` only for an exact zero.
#[inline]
pub fn sign3(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Coefficient matrix of a game, stored dense and row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_labels(kind: &str, labels: &[String], expected: usize) -> Result<()> {
    if labels.len() != expected {
        return Err(Error::InvalidGame(format!(
            "{kind} labels: expected {expected}, got {}",
            labels.len()
        )));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::InvalidGame(format!("duplicate {kind} label {l:?}")));
        }
    }
    Ok(())
}

impl GameMatrix {
    /// Builds a game from nested rows with default labels `s0..`, `t0..`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_labels(rows, None, None)
    }

    pub fn with_labels(
        rows: Vec<Vec<f64>>,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidGame("matrix has no rows".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidGame("matrix has no columns".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidGame(format!(
                "non-rectangular matrix: row 0 has {n} entries, row {i} has {}",
                r.len()
            )));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_flat(m, n, entries, row_labels, col_labels)
    }

    pub fn from_flat(
        rows: usize,
        cols: usize,
        entries: Vec<f64>,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidGame(format!("empty shape {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidGame(format!(
                "{} entries for shape {rows}x{cols}",
                entries.len()
            )));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidGame(format!("non-finite entry {v}")));
        }
        let row_labels = row_labels.unwrap_or_else(|| default_labels("s", rows));
        let col_labels = col_labels.unwrap_or_else(|| default_labels("t", cols));
        check_labels("row", &row_labels, rows)?;
        check_labels("column", &col_labels, cols)?;
        Ok(GameMatrix {
            rows,
            cols,
            entries,
            row_labels,
            col_labels,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.entries[s * self.cols + t]
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.entries[s * self.cols..(s + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn column_sum(&self, t: usize) -> f64 {
        (0..self.rows).map(|s| self.get(s, t)).sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).sum()
    }

    pub fn column_abs_sum(&self, t: usize) -> f64 {
        (0..self.rows).map(|s| self.get(s, t).abs()).sum()
    }

    pub fn sign_matrix(&self) -> SignMatrix {
        SignMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&v| sign3(v)).collect(),
        }
    }

    /// Sub-game made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<GameMatrix> {
        let entries = (0..self.rows)
            .flat_map(|s| columns.iter().map(move |&t| self.get(s, t)))
            .collect();
        let col_labels = columns.iter().map(|&t| self.col_labels[t].clone()).collect();
        GameMatrix::from_flat(
            self.rows,
            columns.len(),
            entries,
            Some(self.row_labels.clone()),
            Some(col_labels),
        )
    }

    /// `a + b * t`, entrywise. Labels are taken from `a`.
    pub fn affine(a: &GameMatrix, b: &GameMatrix, t: f64) -> Result<GameMatrix> {
        check_same_shape("A", a.shape(), "B", b.shape())?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x + y * t)
            .collect();
        GameMatrix::from_flat(
            a.rows,
            a.cols,
            entries,
            Some(a.row_labels.clone()),
            Some(a.col_labels.clone()),
        )
    }

    pub fn scaled(&self, k: f64) -> GameMatrix {
        GameMatrix {
            entries: self.entries.iter().map(|v| v * k).collect(),
            ..self.clone()
        }
    }

    pub fn from_json(text: &str) -> Result<GameMatrix> {
        let raw: GameJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

fn check_same_shape(
    left: &'static str,
    (lr, lc): (usize, usize),
    right: &'static str,
    (rr, rc): (usize, usize),
) -> Result<()> {
    if lr != rr || lc != rc {
        return Err(Error::DimensionMismatch {
            left,
            left_rows: lr,
            left_cols: lc,
            right,
            right_rows: rr,
            right_cols: rc,
        });
    }
    Ok(())
}

/// On-disk game representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameJson {
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
}

impl TryFrom<GameJson> for GameMatrix {
    type Error = Error;

    fn try_from(raw: GameJson) -> Result<Self> {
        GameMatrix::with_labels(raw.c, raw.row_labels, raw.col_labels)
    }
}

impl From<&GameMatrix> for GameJson {
    fn from(g: &GameMatrix) -> Self {
        GameJson {
            c: g.to_rows(),
            row_labels: Some(g.row_labels.clone()),
            col_labels: Some(g.col_labels.clone()),
        }
    }
}

impl Serialize for GameMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GameJson::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GameMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = GameJson::deserialize(de)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

/// Expected value of Bob's ±1 answer for every `(s, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl StrategyMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidStrategy("strategy matrix must be non-empty and rectangular".into()));
        }
        Self::from_flat(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidStrategy(format!(
                "{} entries for shape {rows}x{cols}",
                entries.len()
            )));
        }
        if let Some(v) = entries
            .iter()
            .find(|v| !v.is_finite() || v.abs() > 1.0 + STRATEGY_BOUND_SLACK)
        {
            return Err(Error::InvalidStrategy(format!("entry {v} outside [-1, 1]")));
        }
        Ok(StrategyMatrix { rows, cols, entries })
    }

    /// Builds a matrix from a generator without bound checks beyond `|v| <= 1`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let entries = (0..rows)
            .flat_map(|s| (0..cols).map(move |t| (s, t)))
            .map(|(s, t)| f(s, t))
            .collect();
        Self::from_flat(rows, cols, entries)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.entries[s * self.cols + t]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }
}

/// `<C, S> = sum_{s,t} C_st S_st`.
pub fn game_value(c: &GameMatrix, s: &StrategyMatrix) -> Result<f64> {
    check_same_shape("C", c.shape(), "S", s.shape())?;
    Ok(c.entries.iter().zip(&s.entries).map(|(a, b)| a * b).sum())
}

/// Entrywise sign of a coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn from_rows(rows: &[&[i8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SignMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, s: usize, t: usize) -> i8 {
        self.entries[s * self.cols + t]
    }

    pub fn row(&self, s: usize) -> &[i8] {
        &self.entries[s * self.cols..(s + 1) * self.cols]
    }

    pub fn distinct_rows(&self) -> usize {
        let mut seen: Vec<&[i8]> = Vec::new();
        for s in 0..self.rows {
            if !seen.contains(&self.row(s)) {
                seen.push(self.row(s));
            }
        }
        seen.len()
    }

    /// Whether the nonzero entries of column `t` share one sign (a zero
    /// column counts as homogeneous).
    pub fn column_homogeneous(&self, t: usize) -> bool {
        let mut seen = 0i8;
        for s in 0..self.rows {
            let v = self.get(s, t);
            if v != 0 {
                if seen != 0 && v != seen {
                    return false;
                }
                seen = v;
            }
        }
        true
    }

    /// Sign of a homogeneous column; `+1` for an all-zero column.
    fn column_sign(&self, t: usize) -> i8 {
        (0..self.rows)
            .map(|s| self.get(s, t))
            .find(|&v| v != 0)
            .unwrap_or(1)
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.cols).map(<[i8]>::to_vec).collect()
    }
}

/// Relabeling, column negation and homogeneous-column removal of a game.
///
/// The transformed game is `C'[i][j] = neg_j * C[row_permutation[i]][col_permutation[j]]`,
/// where `col_permutation` ranges over the kept (non-dropped) columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTransform {
    pub original_shape: (usize, usize),
    pub row_permutation: Vec<usize>,
    pub col_permutation: Vec<usize>,
    pub col_negations: Vec<bool>,
    pub dropped_columns: Vec<usize>,
    /// Sign Bob plays on each dropped column (same order as `dropped_columns`).
    pub dropped_signs: Vec<i8>,
    /// `sum_{dropped t} sum_s |C_st|`, the value every regime earns on them.
    pub dropped_contribution: f64,
}

impl GameTransform {
    pub fn identity(rows: usize, cols: usize) -> Self {
        GameTransform {
            original_shape: (rows, cols),
            row_permutation: (0..rows).collect(),
            col_permutation: (0..cols).collect(),
            col_negations: vec![false; cols],
            dropped_columns: Vec::new(),
            dropped_signs: Vec::new(),
            dropped_contribution: 0.0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.dropped_columns.is_empty()
            && self.row_permutation.iter().enumerate().all(|(i, &r)| i == r)
            && self.col_permutation.iter().enumerate().all(|(i, &c)| i == c)
            && self.col_negations.iter().all(|n| !n)
    }

    fn neg(&self, j: usize) -> f64 {
        if self.col_negations[j] {
            -1.0
        } else {
            1.0
        }
    }

    pub fn apply_to_game(&self, c: &GameMatrix) -> Result<GameMatrix> {
        check_same_shape("C", c.shape(), "transform", self.original_shape)?;
        if self.col_permutation.is_empty() {
            return Err(Error::TrivialGame("every column was dropped".into()));
        }
        let mut entries = Vec::with_capacity(self.row_permutation.len() * self.col_permutation.len());
        for &r in &self.row_permutation {
            for (j, &k) in self.col_permutation.iter().enumerate() {
                entries.push(self.neg(j) * c.get(r, k));
            }
        }
        let row_labels = self.row_permutation.iter().map(|&r| c.row_labels[r].clone()).collect();
        let col_labels = self.col_permutation.iter().map(|&k| c.col_labels[k].clone()).collect();
        GameMatrix::from_flat(
            self.row_permutation.len(),
            self.col_permutation.len(),
            entries,
            Some(row_labels),
            Some(col_labels),
        )
    }

    /// Maps a strategy for the original game onto the transformed game.
    pub fn apply_to_strategy(&self, s: &StrategyMatrix) -> Result<StrategyMatrix> {
        check_same_shape("S", s.shape(), "transform", self.original_shape)?;
        StrategyMatrix::from_fn(self.row_permutation.len(), self.col_permutation.len(), |i, j| {
            self.neg(j) * s.get(self.row_permutation[i], self.col_permutation[j])
        })
    }

    /// Maps a strategy for the transformed game back onto the original one.
    /// Dropped columns are filled with their homogeneous sign.
    pub fn invert_strategy(&self, s: &StrategyMatrix) -> Result<StrategyMatrix> {
        check_same_shape(
            "S",
            s.shape(),
            "transformed game",
            (self.row_permutation.len(), self.col_permutation.len()),
        )?;
        let (m, n) = self.original_shape;
        let mut entries = vec![0.0; m * n];
        for (i, &r) in self.row_permutation.iter().enumerate() {
            for (j, &k) in self.col_permutation.iter().enumerate() {
                entries[r * n + k] = self.neg(j) * s.get(i, j);
            }
            for (&k, &sg) in self.dropped_columns.iter().zip(&self.dropped_signs) {
                entries[r * n + k] = f64::from(sg);
            }
        }
        StrategyMatrix::from_flat(m, n, entries)
    }

    /// Original-game value of a value computed on the transformed game.
    pub fn reconstitute_value(&self, transformed_value: f64) -> f64 {
        transformed_value + self.dropped_contribution
    }
}

/// Removes every sign-homogeneous column. The reduced game may be empty
/// (`None`) when all columns are homogeneous.
pub fn reduce_homogeneous_columns(c: &GameMatrix) -> (Option<GameMatrix>, GameTransform) {
    let signs = c.sign_matrix();
    let mut t = GameTransform::identity(c.rows(), c.cols());
    t.col_permutation.clear();
    t.col_negations.clear();
    for col in 0..c.cols() {
        if signs.column_homogeneous(col) {
            t.dropped_columns.push(col);
            t.dropped_signs.push(signs.column_sign(col));
            t.dropped_contribution += c.column_abs_sum(col);
        } else {
            t.col_permutation.push(col);
            t.col_negations.push(false);
        }
    }
    let reduced = if t.col_permutation.is_empty() {
        None
    } else {
        Some(t.apply_to_game(c).expect("shape checked above"))
    };
    (reduced, t)
}

/// Target sign pattern of a canonical 3x2 game.
pub const CANONICAL_3X2: [[i8; 2]; 3] = [[1, 1], [1, -1], [-1, -1]];

const ROW_PERMS_3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];
const COL_PERMS_2: [[usize; 2]; 2] = [[0, 1], [1, 0]];
const NEGATIONS_2: [[bool; 2]; 4] = [[false, false], [false, true], [true, false], [true, true]];

/// Whether a 3x2 game already has the canonical sign matrix.
pub fn is_canonical_3x2(c: &GameMatrix) -> bool {
    c.shape() == (3, 2)
        && (0..3).all(|s| (0..2).all(|t| sign3(c.get(s, t)) == CANONICAL_3X2[s][t]))
}

/// Transforms a 3x2 game into one with sign matrix `[[1,1],[1,-1],[-1,-1]]`,
/// choosing the lexicographically smallest (rows, cols, negations) triple.
pub fn canonicalize_3x2(c: &GameMatrix) -> Result<(GameMatrix, GameTransform)> {
    if c.shape() != (3, 2) {
        return Err(Error::InvalidGame(format!(
            "canonicalization needs a 3x2 game, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let signs = c.sign_matrix();
    if c.entries().contains(&0.0) {
        return Err(Error::TrivialGame("3x2 game has zero entries".into()));
    }
    for rows in &ROW_PERMS_3 {
        for cols in &COL_PERMS_2 {
            for negs in &NEGATIONS_2 {
                let matches = (0..3).all(|i| {
                    (0..2).all(|j| {
                        let v = signs.get(rows[i], cols[j]);
                        let v = if negs[j] { -v } else { v };
                        v == CANONICAL_3X2[i][j]
                    })
                });
                if matches {
                    let t = GameTransform {
                        original_shape: (3, 2),
                        row_permutation: rows.to_vec(),
                        col_permutation: cols.to_vec(),
                        col_negations: negs.to_vec(),
                        dropped_columns: Vec::new(),
                        dropped_signs: Vec::new(),
                        dropped_contribution: 0.0,
                    };
                    let g = t.apply_to_game(c)?;
                    return Ok((g, t));
                }
            }
        }
    }
    Err(Error::TrivialGame(format!(
        "sign matrix {:?} has {} distinct rows",
        signs.to_rows(),
        signs.distinct_rows()
    )))
}
