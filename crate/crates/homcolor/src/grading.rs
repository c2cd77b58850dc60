//! Finitely generated abelian grading groups and ±1-valued commutation factors.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::report::{CheckReport, Outcome, Witness};
use crate::scalar::Scalar;

/// `Z/m_1 x ... x Z/m_k x Z^free`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroupSpec {
    torsion: Vec<u32>,
    free: usize,
}

/// Coordinates in an [`AbelianGroupSpec`]; torsion slots are kept reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl AbelianGroupSpec {
    pub fn new(torsion: Vec<u32>, free: usize) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|m| **m < 2) {
            return Err(Error::Grading(format!("torsion modulus {m} must be at least 2")));
        }
        Ok(AbelianGroupSpec { torsion, free })
    }

    pub fn trivial() -> Self {
        AbelianGroupSpec {
            torsion: Vec::new(),
            free: 0,
        }
    }

    pub fn torsion(&self) -> &[u32] {
        &self.torsion
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn rank(&self) -> usize {
        self.torsion.len() + self.free
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::Grading(format!(
                "degree has {} coordinates, group rank is {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(self.reduce(coords.to_vec()))
    }

    fn reduce(&self, mut v: Vec<i64>) -> GroupElement {
        for (c, m) in v.iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(*m as i64);
        }
        GroupElement(v)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.reduce(a.0.iter().map(|x| -x).collect())
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.rank()
            && a.0
                .iter()
                .zip(&self.torsion)
                .all(|(c, m)| (0..*m as i64).contains(c))
    }
}

/// A commutation factor given by its values on generator pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bicharacter {
    group: AbelianGroupSpec,
    matrix: Vec<Vec<i8>>,
}

pub type GradingContext = Bicharacter;

impl Bicharacter {
    pub fn new(group: AbelianGroupSpec, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let r = group.rank();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Grading(format!("bicharacter matrix must be {r}x{r}")));
        }
        let mut m = vec![vec![1i8; r]; r];
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[i][j] = match v {
                    1 => 1,
                    -1 => -1,
                    _ => {
                        return Err(Error::Grading(format!(
                            "bicharacter entry ({i},{j}) is {v}; only 1 and -1 are supported"
                        )))
                    }
                };
            }
        }
        Ok(Bicharacter { group, matrix: m })
    }

    /// All values `+1`.
    pub fn trivial(group: AbelianGroupSpec) -> Self {
        let r = group.rank();
        Bicharacter {
            group,
            matrix: vec![vec![1; r]; r],
        }
    }

    /// `Z/2` with `eps(i, j) = (-1)^{ij}`.
    pub fn superalgebra() -> Self {
        Bicharacter {
            group: AbelianGroupSpec {
                torsion: vec![2],
                free: 0,
            },
            matrix: vec![vec![-1]],
        }
    }

    pub fn group(&self) -> &AbelianGroupSpec {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<i8>] {
        &self.matrix
    }

    /// `eps(a, b)` as a sign. Both elements must belong to the group.
    pub fn sign(&self, a: &GroupElement, b: &GroupElement) -> i8 {
        let mut odd = 0i64;
        for (i, row) in self.matrix.iter().enumerate() {
            let ai = a.0[i];
            if ai == 0 {
                continue;
            }
            for (j, e) in row.iter().enumerate() {
                if *e < 0 {
                    odd += (ai * b.0[j]).rem_euclid(2);
                }
            }
        }
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn eps(&self, a: &GroupElement, b: &GroupElement) -> Result<Scalar> {
        if !self.group.contains(a) || !self.group.contains(b) {
            return Err(Error::Grading("element outside the grading group".into()));
        }
        Ok(Scalar::from_int(self.sign(a, b) as i64))
    }
}

/// Checks skew-symmetry and torsion compatibility on generator pairs.
pub fn validate_commutation_factor(ctx: &Bicharacter) -> CheckReport {
    let start = Instant::now();
    let torsion = ctx.group.torsion();
    let r = ctx.group.rank();
    let mut failure = None;
    'outer: for i in 0..r {
        for j in 0..r {
            let e_ij = ctx.matrix[i][j] as i64;
            let product = e_ij * ctx.matrix[j][i] as i64;
            let order_i = torsion.get(i).copied();
            let order_j = torsion.get(j).copied();
            let bad_order = [order_i, order_j]
                .iter()
                .flatten()
                .any(|m| e_ij.pow(*m) != 1);
            if product != 1 {
                failure = Some((i, j, Scalar::from_int(product - 1)));
                break 'outer;
            }
            if bad_order {
                failure = Some((i, j, Scalar::from_int(e_ij - 1)));
                break 'outer;
            }
        }
    }
    let outcome = match failure {
        None => Outcome::Pass,
        Some((i, j, defect)) => Outcome::Fail(Witness {
            tuple: vec![i, j],
            names: vec![format!("g{i}"), format!("g{j}")],
            defect: vec![("eps".into(), defect)],
        }),
    };
    CheckReport::new("COMMUTATION_FACTOR", Vec::new(), outcome, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_torsion_rejects_minus_one() {
        let g = AbelianGroupSpec::new(vec![3], 0).unwrap();
        let b = Bicharacter::new(g, vec![vec![-1]]).unwrap();
        assert!(!validate_commutation_factor(&b).passed());
    }

    #[test]
    fn reduction_is_applied() {
        let g = AbelianGroupSpec::new(vec![2, 2], 1).unwrap();
        let e = g.element(&[3, -1, -5]).unwrap();
        assert_eq!(e.coords(), &[1, 1, -5]);
    }
}
