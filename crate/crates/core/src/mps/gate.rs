use crate::error::{MnsError, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Unitarity tolerance for gates.
pub const GATE_UNITARY_TOL: f64 = 1e-10;

/// One local operation on an MPS.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// `matrix` is d×d on `site`.
    Single { site: usize, matrix: ComplexMatrix },
    /// `matrix` is (d_a·d_b)² with basis index `s_a·d_b + s_b`; sites may be
    /// nonadjacent and in either order.
    Two {
        sites: (usize, usize),
        matrix: ComplexMatrix,
    },
    /// Diagonal phases over the joint basis of one or two sites.
    Diagonal { sites: Vec<usize>, phases: Vec<C64> },
}

impl Gate {
    pub fn sites(&self) -> Vec<usize> {
        match self {
            Gate::Single { site, .. } => vec![*site],
            Gate::Two { sites, .. } => vec![sites.0, sites.1],
            Gate::Diagonal { sites, .. } => sites.clone(),
        }
    }

    /// Checks targets and matrix size against the local dimensions.
    pub fn check_against(&self, phys_dims: &[usize]) -> Result<()> {
        let n = phys_dims.len();
        let sites = self.sites();
        if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
            return Err(MnsError::InvalidParameter(format!(
                "gate targets site {bad} of {n}"
            )));
        }
        let expected: usize = sites.iter().map(|&s| phys_dims[s]).product();
        let (rows, cols) = match self {
            Gate::Single { matrix, .. } | Gate::Two { matrix, .. } => (matrix.rows(), matrix.cols()),
            Gate::Diagonal { sites, phases } => {
                if sites.is_empty() || sites.len() > 2 {
                    return Err(MnsError::Shape(format!(
                        "diagonal gate on {} sites",
                        sites.len()
                    )));
                }
                (phases.len(), phases.len())
            }
        };
        if sites.len() == 2 && sites[0] == sites[1] {
            return Err(MnsError::InvalidParameter(format!(
                "two-site gate repeats site {}",
                sites[0]
            )));
        }
        if rows != expected || cols != expected {
            return Err(MnsError::Shape(format!(
                "{rows}x{cols} gate on sites {sites:?} needs dimension {expected}"
            )));
        }
        Ok(())
    }

    /// max |G†G − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        match self {
            Gate::Single { matrix, .. } | Gate::Two { matrix, .. } => matrix.unitarity_deviation(),
            Gate::Diagonal { phases, .. } => phases
                .iter()
                .map(|p| (p.norm_sqr() - 1.0).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Ordered gates validated against a fixed set of local dimensions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateList {
    gates: Vec<Gate>,
}

impl GateList {
    /// Validates targets, shapes and unitarity of every gate. Swap routing
    /// permutes dimensions during evolution, so `phys_dims` describes the
    /// register layout the gates address.
    pub fn new(gates: Vec<Gate>, phys_dims: &[usize]) -> Result<Self> {
        for g in &gates {
            g.check_against(phys_dims)?;
            let dev = g.unitarity_deviation();
            if dev > GATE_UNITARY_TOL {
                return Err(MnsError::NotUnitary(dev));
            }
        }
        Ok(Self { gates })
    }

    /// For gates that are unitary by construction.
    pub(crate) fn from_trusted(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gate> {
        self.gates.iter()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: GateList) {
        self.gates.extend(other.gates);
    }

    pub fn as_slice(&self) -> &[Gate] {
        &self.gates
    }
}

impl<'a> IntoIterator for &'a GateList {
    type Item = &'a Gate;
    type IntoIter = std::slice::Iter<'a, Gate>;
    fn into_iter(self) -> Self::IntoIter {
        self.gates.iter()
    }
}
