//! Diagonal IQP circuits and their text format.
//!
//! One line per layer. Tokens `Z i`, `S i`, `T i` and `CZ i j`, separated by
//! whitespace, commas or semicolons; `#` starts a comment. Blank lines are
//! skipped; a line holding only `-` is an explicit empty layer.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_unit_interval, MnsError, Result};
use crate::linalg::{C64, ONE};
use crate::mps::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagonalGate {
    Z(usize),
    S(usize),
    T(usize),
    Cz(usize, usize),
}

impl DiagonalGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            DiagonalGate::Z(q) | DiagonalGate::S(q) | DiagonalGate::T(q) => vec![q],
            DiagonalGate::Cz(a, b) => vec![a, b],
        }
    }

    /// Phases over the joint basis of [`qubits`](Self::qubits).
    pub fn phases(&self) -> Vec<C64> {
        let i = C64::new(0.0, 1.0);
        match self {
            DiagonalGate::Z(_) => vec![ONE, -ONE],
            DiagonalGate::S(_) => vec![ONE, i],
            DiagonalGate::T(_) => vec![ONE, C64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)],
            DiagonalGate::Cz(..) => vec![ONE, ONE, ONE, -ONE],
        }
    }

    pub fn to_gate(&self) -> Gate {
        Gate::Diagonal {
            sites: self.qubits(),
            phases: self.phases(),
        }
    }

    /// Phase this gate contributes to computational basis state `x`
    /// (qubit 0 is the most significant bit of an n-bit index).
    pub fn phase_on(&self, x: usize, n: usize) -> C64 {
        let bit = |q: usize| (x >> (n - 1 - q)) & 1;
        let joint = self.qubits().iter().fold(0, |acc, &q| acc * 2 + bit(q));
        self.phases()[joint]
    }
}

/// Layers of commuting diagonal gates on `qubit_count` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct IqpCircuit {
    qubit_count: usize,
    layers: Vec<Vec<DiagonalGate>>,
}

impl IqpCircuit {
    pub fn new(qubit_count: usize, layers: Vec<Vec<DiagonalGate>>) -> Result<Self> {
        if qubit_count == 0 {
            return Err(MnsError::InvalidDimension("IQP circuit with no qubits".into()));
        }
        for g in layers.iter().flatten() {
            let q = g.qubits();
            if q.iter().any(|&x| x >= qubit_count) {
                return Err(MnsError::InvalidParameter(format!(
                    "{g:?} outside {qubit_count} qubits"
                )));
            }
            if q.len() == 2 && q[0] == q[1] {
                return Err(MnsError::InvalidParameter(format!("{g:?} repeats a qubit")));
            }
        }
        Ok(Self { qubit_count, layers })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<DiagonalGate>] {
        &self.layers
    }

    /// Parses the text format; `qubits` may raise the inferred width.
    pub fn parse(text: &str, qubits: Option<usize>) -> Result<Self> {
        let mut layers = Vec::new();
        let mut max_index = None::<usize>;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if body == "-" {
                layers.push(Vec::new());
                continue;
            }
            let mut tokens = body
                .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
                .filter(|t| !t.is_empty());
            let mut layer = Vec::new();
            let err = |message: String| MnsError::Parse { line, message };
            let mut index = |tokens: &mut dyn Iterator<Item = &str>, op: &str| -> Result<usize> {
                let t = tokens
                    .next()
                    .ok_or_else(|| err(format!("{op} is missing a qubit index")))?;
                let q: usize = t
                    .parse()
                    .map_err(|_| err(format!("bad qubit index {t:?} after {op}")))?;
                max_index = Some(max_index.map_or(q, |m: usize| m.max(q)));
                Ok(q)
            };
            while let Some(op) = tokens.next() {
                let gate = match op.to_ascii_uppercase().as_str() {
                    "Z" => DiagonalGate::Z(index(&mut tokens, op)?),
                    "S" => DiagonalGate::S(index(&mut tokens, op)?),
                    "T" => DiagonalGate::T(index(&mut tokens, op)?),
                    "CZ" => {
                        let a = index(&mut tokens, op)?;
                        let b = index(&mut tokens, op)?;
                        if a == b {
                            return Err(err(format!("CZ on a single qubit {a}")));
                        }
                        DiagonalGate::Cz(a, b)
                    }
                    _ => return Err(err(format!("unknown token {op:?}"))),
                };
                layer.push(gate);
            }
            layers.push(layer);
        }
        let inferred = max_index.map_or(0, |m| m + 1);
        let n = match qubits {
            Some(q) if q < inferred => {
                return Err(MnsError::InvalidParameter(format!(
                    "circuit uses qubit {} but only {q} qubits were requested",
                    inferred - 1
                )))
            }
            Some(q) => q,
            None => inferred,
        };
        Self::new(n, layers)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            if layer.is_empty() {
                out.push_str("-\n");
                continue;
            }
            let tokens: Vec<String> = layer
                .iter()
                .map(|g| match *g {
                    DiagonalGate::Z(q) => format!("Z {q}"),
                    DiagonalGate::S(q) => format!("S {q}"),
                    DiagonalGate::T(q) => format!("T {q}"),
                    DiagonalGate::Cz(a, b) => format!("CZ {a} {b}"),
                })
                .collect();
            let _ = writeln!(out, "{}", tokens.join(" "));
        }
        out
    }
}

/// Random layers: CZ on each adjacent pair with probability `cz_density`,
/// and one of {I, Z, S, T} uniformly on every qubit.
pub fn random_iqp_circuit(n: usize, depth: usize, cz_density: f64, seed: u64) -> Result<IqpCircuit> {
    check_unit_interval("cz_density", cz_density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(depth);
    for _ in 0..depth {
        let mut layer = Vec::new();
        for q in 0..n {
            match rng.random_range(0..4u8) {
                1 => layer.push(DiagonalGate::Z(q)),
                2 => layer.push(DiagonalGate::S(q)),
                3 => layer.push(DiagonalGate::T(q)),
                _ => {}
            }
        }
        for q in 0..n.saturating_sub(1) {
            if rng.random::<f64>() < cz_density {
                layer.push(DiagonalGate::Cz(q, q + 1));
            }
        }
        layers.push(layer);
    }
    IqpCircuit::new(n, layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_layers_and_comments() {
        let c = IqpCircuit::parse("# header\nZ 0 CZ 0 1\n\nT 2, S 1 # trailing\n-\n", None).unwrap();
        assert_eq!(c.qubit_count(), 3);
        assert_eq!(c.depth(), 3);
        assert_eq!(c.layers()[0], vec![DiagonalGate::Z(0), DiagonalGate::Cz(0, 1)]);
        assert!(c.layers()[2].is_empty());
        let again = IqpCircuit::parse(&c.to_text(), None).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = IqpCircuit::parse("Z 0\nX 1\n", None).unwrap_err();
        assert_eq!(e, MnsError::Parse { line: 2, message: "unknown token \"X\"".into() });
        let e = IqpCircuit::parse("\n\nCZ 1\n", None).unwrap_err();
        assert!(matches!(e, MnsError::Parse { line: 3, .. }));
        let e = IqpCircuit::parse("S q\n", None).unwrap_err();
        assert!(matches!(e, MnsError::Parse { line: 1, .. }));
        assert!(IqpCircuit::parse("Z 4", Some(3)).is_err());
        assert_eq!(IqpCircuit::parse("Z 1", Some(5)).unwrap().qubit_count(), 5);
    }

    #[test]
    fn random_circuit_is_seeded() {
        let a = random_iqp_circuit(6, 4, 0.5, 3).unwrap();
        assert_eq!(a, random_iqp_circuit(6, 4, 0.5, 3).unwrap());
        let none = random_iqp_circuit(6, 4, 0.0, 3).unwrap();
        assert!(none.layers().iter().flatten().all(|g| g.qubits().len() == 1));
    }

    #[test]
    fn phase_on_bits() {
        let cz = DiagonalGate::Cz(0, 2);
        assert_eq!(cz.phase_on(0b101, 3), -ONE);
        assert_eq!(cz.phase_on(0b100, 3), ONE);
        assert_eq!(DiagonalGate::S(1).phase_on(0b010, 3), C64::new(0.0, 1.0));
    }
}
