use std::fmt;

use crate::error::{Error, Result};

/// The three variable families: the coordinates `x(i)` of affine space, the
/// deformation parameters `t(i,j,k)` and the structure constants `s(i,j,k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    X,
    T,
    S,
}

/// A typed variable name.
///
/// The derived order is the global variable order
/// `x(1) < ... < x(n) < t(1,1,1) < ... < s(0,0,0) < ...`; `t` variables are
/// always stored with `i <= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    kind: VarKind,
    a: u8,
    b: u8,
    c: u8,
}

/// Largest ambient dimension supported by the packed variable encoding.
pub const MAX_N: usize = 64;

fn check(n: usize, lo: usize, idx: &[usize], what: impl FnOnce() -> String) -> Result<()> {
    if n > MAX_N {
        return Err(Error::UnsupportedDimension { n, reason: "ambient dimension above 64" });
    }
    if idx.iter().any(|&i| i < lo || i > n) {
        return Err(Error::IndexOutOfRange { what: what(), n });
    }
    Ok(())
}

impl VarId {
    /// `x(i)`, `1 <= i <= n`.
    pub fn x(n: usize, i: usize) -> Result<Self> {
        check(n, 1, &[i], || format!("x({i})"))?;
        Ok(xv(i))
    }

    /// `t(i,j,k)`, `1 <= i,j,k <= n`; `t(j,i,k)` is the same variable.
    pub fn t(n: usize, i: usize, j: usize, k: usize) -> Result<Self> {
        check(n, 1, &[i, j, k], || format!("t({i},{j},{k})"))?;
        Ok(tv(i, j, k))
    }

    /// `s(i,j,k)`, `0 <= i,j,k <= n`. No symmetry is imposed.
    pub fn s(n: usize, i: usize, j: usize, k: usize) -> Result<Self> {
        check(n, 0, &[i, j, k], || format!("s({i},{j},{k})"))?;
        Ok(sv(i, j, k))
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    /// Index of an `x` variable.
    pub fn x_index(&self) -> usize {
        self.a as usize
    }

    /// The index triple of a `t` or `s` variable.
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.a as usize, self.b as usize, self.c as usize)
    }

    pub fn is_x(&self) -> bool {
        self.kind == VarKind::X
    }

    pub fn is_t(&self) -> bool {
        self.kind == VarKind::T
    }

    pub fn is_s(&self) -> bool {
        self.kind == VarKind::S
    }

    /// Whether every index is admissible for ambient dimension `n`.
    pub fn fits(&self, n: usize) -> bool {
        let max = self.a.max(self.b).max(self.c) as usize;
        match self.kind {
            VarKind::X => self.a >= 1 && max <= n,
            VarKind::T => self.a >= 1 && self.b >= 1 && self.c >= 1 && max <= n,
            VarKind::S => max <= n,
        }
    }

    /// Contributions to the torus weight: `x_i` has weight `e_i`, and
    /// `t(i,j,k)`, `s(i,j,k)` have weight `e_i + e_j - e_k` with `e_0 = 0`.
    pub fn weight_terms(&self) -> [(usize, i32); 3] {
        match self.kind {
            VarKind::X => [(self.a as usize, 1), (0, 0), (0, 0)],
            VarKind::T | VarKind::S => [(self.a as usize, 1), (self.b as usize, 1), (self.c as usize, -1)],
        }
    }

    /// Internal degree: the coordinate sum of the torus weight. Every `x` and
    /// `t` variable has degree 1; `s(i,j,0)` with `i,j >= 1` has degree 2.
    pub fn internal_degree(&self) -> i32 {
        self.weight_terms().iter().filter(|(i, _)| *i != 0).map(|(_, w)| w).sum()
    }

    /// Rendering with the variables renamed `x_i`, `t_i_j_k`, `s_i_j_k`.
    pub fn cas_name(&self) -> String {
        match self.kind {
            VarKind::X => format!("x_{}", self.a),
            VarKind::T => format!("t_{}_{}_{}", self.a, self.b, self.c),
            VarKind::S => format!("s_{}_{}_{}", self.a, self.b, self.c),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::X => write!(f, "x({})", self.a),
            VarKind::T => write!(f, "t({},{},{})", self.a, self.b, self.c),
            VarKind::S => write!(f, "s({},{},{})", self.a, self.b, self.c),
        }
    }
}

/// Unchecked `x(i)`.
pub fn xv(i: usize) -> VarId {
    debug_assert!((1..=MAX_N).contains(&i));
    VarId { kind: VarKind::X, a: i as u8, b: 0, c: 0 }
}

/// Unchecked `t(i,j,k)`, canonicalised to `i <= j`.
pub fn tv(i: usize, j: usize, k: usize) -> VarId {
    debug_assert!(i >= 1 && j >= 1 && k >= 1 && i.max(j).max(k) <= MAX_N);
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    VarId { kind: VarKind::T, a: a as u8, b: b as u8, c: k as u8 }
}

/// Unchecked `s(i,j,k)`.
pub fn sv(i: usize, j: usize, k: usize) -> VarId {
    debug_assert!(i.max(j).max(k) <= MAX_N);
    VarId { kind: VarKind::S, a: i as u8, b: j as u8, c: k as u8 }
}

/// All `t` variables for ambient dimension `n`, in variable order.
pub fn t_vars(n: usize) -> Vec<VarId> {
    let mut out = Vec::with_capacity(n * n * (n + 1) / 2);
    for i in 1..=n {
        for j in i..=n {
            for k in 1..=n {
                out.push(tv(i, j, k));
            }
        }
    }
    out
}

/// All `s` variables for ambient dimension `n`, in variable order.
pub fn s_vars(n: usize) -> Vec<VarId> {
    let mut out = Vec::with_capacity((n + 1).pow(3));
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                out.push(sv(i, j, k));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_is_symmetric_in_lower_indices() {
        for n in 3..=5 {
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        assert_eq!(VarId::t(n, i, j, k).unwrap(), VarId::t(n, j, i, k).unwrap());
                    }
                }
            }
        }
        assert_eq!(VarId::t(3, 2, 1, 3).unwrap().triple(), (1, 2, 3));
    }

    #[test]
    fn range_is_validated() {
        assert!(VarId::x(3, 0).is_err());
        assert!(VarId::x(3, 4).is_err());
        assert!(VarId::t(3, 1, 4, 1).is_err());
        assert!(VarId::s(3, 0, 0, 0).is_ok());
        assert!(VarId::s(3, 0, 4, 0).is_err());
    }

    #[test]
    fn global_order() {
        let n = 3;
        let mut all: Vec<VarId> = (1..=n).map(xv).collect();
        all.extend(t_vars(n));
        all.extend(s_vars(n));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(t_vars(3).len(), 18);
        assert_eq!(t_vars(4).len(), 40);
    }

    #[test]
    fn degrees() {
        assert_eq!(xv(2).internal_degree(), 1);
        assert_eq!(tv(1, 2, 3).internal_degree(), 1);
        assert_eq!(sv(1, 2, 0).internal_degree(), 2);
        assert_eq!(sv(0, 1, 1).internal_degree(), 0);
    }
}
