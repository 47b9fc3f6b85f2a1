//! Finite-dimensional SSD spaces: a symmetric bilinear form `\[b,c\] = b^T G c`,
//! the induced quadratic form q(b) = \[b,b\]/2, the pairing map iota(c) = G c
//! into the (coordinate-identified) dual, and the Banach-SSD margin
//! lambda_min(I + G) certifying that ||.||^2/2 + q >= 0.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, eigen_sym, Mat};
use serde::{Deserialize, Serialize};

pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpacePreset {
    Hilbert(usize),
    AntiHilbert(usize),
    R3Example,
    Product(usize),
}

impl std::fmt::Display for SpacePreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpacePreset::Hilbert(n) => write!(f, "hilbert:{n}"),
            SpacePreset::AntiHilbert(n) => write!(f, "anti_hilbert:{n}"),
            SpacePreset::R3Example => write!(f, "r3"),
            SpacePreset::Product(n) => write!(f, "product:{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsdSpace {
    dim: usize,
    gram: Mat,
    preset: Option<SpacePreset>,
}

impl SsdSpace {
    pub fn hilbert(n: usize) -> Self {
        SsdSpace {
            dim: n,
            gram: Mat::identity(n),
            preset: Some(SpacePreset::Hilbert(n)),
        }
    }

    pub fn anti_hilbert(n: usize) -> Self {
        SsdSpace {
            dim: n,
            gram: Mat::identity(n).scale(-1.0),
            preset: Some(SpacePreset::AntiHilbert(n)),
        }
    }

    /// R^3 with \[b,c\] = b1 c2 + b2 c1 + b3 c3.
    pub fn r3_example() -> Self {
        let gram = Mat::from_rows(vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        SsdSpace {
            dim: 3,
            gram,
            preset: Some(SpacePreset::R3Example),
        }
    }

    /// X x X* with X = R^n: \[b,c\] = <x, y*> + <y, x*>; G is the block swap.
    pub fn product(n: usize) -> Self {
        let gram = Mat::from_fn(2 * n, 2 * n, |i, j| {
            if i + n == j || j + n == i {
                1.0
            } else {
                0.0
            }
        });
        SsdSpace {
            dim: 2 * n,
            gram,
            preset: Some(SpacePreset::Product(n)),
        }
    }

    /// Custom space from a dense Gram matrix. Asymmetry beyond 1e-12 is an
    /// input error, not silently repaired.
    pub fn from_gram(gram: Mat) -> Result<Self> {
        if gram.rows() == 0 || gram.rows() != gram.cols() {
            return Err(Error::input("gram matrix must be square and nonzero"));
        }
        let defect = gram.symmetry_defect();
        if defect > SYMMETRY_TOL * (1.0 + gram.max_abs()) {
            return Err(Error::input(format!(
                "gram matrix is not symmetric (defect {defect:.3e})"
            )));
        }
        Ok(SsdSpace {
            dim: gram.rows(),
            gram,
            preset: None,
        })
    }

    /// Parse a preset name: `hilbert:<n>`, `anti_hilbert:<n>`, `r3`,
    /// `product:<n>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parse_n = |s: &str| -> Result<usize> {
            let n: usize = s
                .parse()
                .map_err(|_| Error::input(format!("bad dimension `{s}`")))?;
            if n == 0 {
                return Err(Error::input("dimension must be positive"));
            }
            Ok(n)
        };
        match spec.split_once(':') {
            None if spec == "r3" => Ok(SsdSpace::r3_example()),
            Some(("hilbert", n)) => Ok(SsdSpace::hilbert(parse_n(n)?)),
            Some(("anti_hilbert", n)) => Ok(SsdSpace::anti_hilbert(parse_n(n)?)),
            Some(("product", n)) => Ok(SsdSpace::product(parse_n(n)?)),
            _ => Err(Error::input(format!("unknown space spec `{spec}`"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn preset(&self) -> Option<&SpacePreset> {
        self.preset.as_ref()
    }

    pub fn check_vec(&self, b: &[f64]) -> Result<()> {
        check_dim(self.dim, b.len())
    }

    /// \[b, c\] = b^T G c.
    pub fn bracket(&self, b: &[f64], c: &[f64]) -> Result<f64> {
        self.check_vec(b)?;
        self.check_vec(c)?;
        Ok(self.bracket_unchecked(b, c))
    }

    pub(crate) fn bracket_unchecked(&self, b: &[f64], c: &[f64]) -> f64 {
        dot(b, &self.gram.matvec(c))
    }

    /// q(b) = \[b, b\] / 2.
    pub fn q(&self, b: &[f64]) -> Result<f64> {
        self.check_vec(b)?;
        Ok(self.q_unchecked(b))
    }

    pub(crate) fn q_unchecked(&self, b: &[f64]) -> f64 {
        0.5 * self.bracket_unchecked(b, b)
    }

    /// q(alpha b + gamma c) - [alpha^2 q(b) + gamma^2 q(c) + alpha gamma \[b,c\]];
    /// identically zero up to roundoff.
    pub fn calculus_residual(&self, alpha: f64, gamma: f64, b: &[f64], c: &[f64]) -> Result<f64> {
        self.check_vec(b)?;
        self.check_vec(c)?;
        let combo: Vec<f64> = b
            .iter()
            .zip(c)
            .map(|(x, y)| alpha * x + gamma * y)
            .collect();
        let lhs = self.q_unchecked(&combo);
        let rhs = alpha * alpha * self.q_unchecked(b)
            + gamma * gamma * self.q_unchecked(c)
            + alpha * gamma * self.bracket_unchecked(b, c);
        Ok(lhs - rhs)
    }

    /// iota(c) = G c, so that <b, iota(c)> = \[b, c\] in the standard pairing.
    pub fn iota(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(c)?;
        Ok(self.gram.matvec(c))
    }

    pub(crate) fn iota_unchecked(&self, c: &[f64]) -> Vec<f64> {
        self.gram.matvec(c)
    }

    /// lambda_min(I + G). The Euclidean norm satisfies ||.||^2/2 + q >= 0 iff
    /// this is >= 0 (tested against -1e-10).
    pub fn banach_margin(&self) -> f64 {
        let a = Mat::identity(self.dim).add(&self.gram);
        eigen_sym(&a).values[0]
    }

    /// ||G||_2, the sharp constant in |\[b,c\]| <= ||G|| ||b|| ||c||.
    pub fn op_norm(&self) -> f64 {
        self.gram.sym_op_norm()
    }

    /// Whether G^2 = I (holds for all four presets); some conjugation routes
    /// need it.
    pub fn gram_is_involution(&self) -> bool {
        let g2 = self.gram.matmul(&self.gram);
        let mut defect = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let want = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((g2[(i, j)] - want).abs());
            }
        }
        defect <= 1e-10
    }

    /// For product(n) spaces, split b into (x, x*).
    pub fn split<'a>(&self, b: &'a [f64]) -> Option<(&'a [f64], &'a [f64])> {
        match self.preset {
            Some(SpacePreset::Product(n)) if b.len() == 2 * n => Some((&b[..n], &b[n..])),
            _ => None,
        }
    }

    /// n for product(n) spaces.
    pub fn product_half(&self) -> Option<usize> {
        match self.preset {
            Some(SpacePreset::Product(n)) => Some(n),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r3_bracket_and_q() {
        let s = SsdSpace::r3_example();
        assert_eq!(s.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), 1.0);
        // q(b1,b2,b3) = b1 b2 + b3^2/2
        assert!((s.q(&[1.0, 1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.q(&[2.0, 3.0, 4.0]).unwrap() - (6.0 + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn product_bracket_and_q() {
        let s = SsdSpace::product(1);
        // [( x, x*), (y, y*)] = x y* + y x*
        assert_eq!(s.bracket(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 10.0);
        assert_eq!(s.q(&[1.0, 2.0]).unwrap(), 2.0);
        let z = [0.0, 0.0];
        assert_eq!(s.bracket(&[5.0, -3.0], &z).unwrap(), 0.0);
        assert_eq!(s.q(&z).unwrap(), 0.0);
    }

    #[test]
    fn iota_per_preset() {
        // hilbert: identity
        let h = SsdSpace::hilbert(3);
        assert_eq!(h.iota(&[1.0, -2.0, 0.5]).unwrap(), vec![1.0, -2.0, 0.5]);
        // anti-hilbert: negation
        let a = SsdSpace::anti_hilbert(2);
        assert_eq!(a.iota(&[1.0, -2.0]).unwrap(), vec![-1.0, 2.0]);
        // product(1): coordinate swap
        let p = SsdSpace::product(1);
        assert_eq!(p.iota(&[3.0, 7.0]).unwrap(), vec![7.0, 3.0]);
    }

    #[test]
    fn banach_margins() {
        assert!((SsdSpace::hilbert(4).banach_margin() - 2.0).abs() < 1e-12);
        assert!(SsdSpace::anti_hilbert(3).banach_margin().abs() < 1e-12);
        assert!(SsdSpace::product(2).banach_margin().abs() < 1e-12);
        assert!(SsdSpace::r3_example().banach_margin().abs() < 1e-12);
        let bad = SsdSpace::from_gram(Mat::identity(2).scale(-2.0)).unwrap();
        assert!((bad.banach_margin() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn calculus_rule_hand_case() {
        let h = SsdSpace::hilbert(2);
        let r = h
            .calculus_residual(1.0, 1.0, &[1.0, 0.0], &[0.0, 1.0])
            .unwrap();
        assert_eq!(r, 0.0);
        // alpha=1, gamma=0 reduces to q(b) = q(b)
        let r = h
            .calculus_residual(1.0, 0.0, &[2.0, 3.0], &[5.0, -1.0])
            .unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let g = Mat::from_rows(vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(SsdSpace::from_gram(g).is_err());
    }

    #[test]
    fn parse_presets() {
        assert_eq!(SsdSpace::parse("hilbert:2").unwrap(), SsdSpace::hilbert(2));
        assert_eq!(SsdSpace::parse("r3").unwrap(), SsdSpace::r3_example());
        assert_eq!(SsdSpace::parse("product:3").unwrap(), SsdSpace::product(3));
        assert!(SsdSpace::parse("weird:1").is_err());
        assert!(SsdSpace::parse("hilbert:0").is_err());
    }

    #[test]
    fn involution_presets() {
        assert!(SsdSpace::hilbert(3).gram_is_involution());
        assert!(SsdSpace::anti_hilbert(3).gram_is_involution());
        assert!(SsdSpace::r3_example().gram_is_involution());
        assert!(SsdSpace::product(2).gram_is_involution());
        let noninv = SsdSpace::from_gram(Mat::identity(2).scale(2.0)).unwrap();
        assert!(!noninv.gram_is_involution());
    }
}
