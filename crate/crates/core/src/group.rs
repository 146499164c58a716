//! Finitely generated abelian groups `ℤⁿ × ∏ ℤ_{mᵢ}`, their elements, and
//! subgroups described by a Hermite normal form.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub SmallVec<[i64; 4]>);

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrpOp {
    Add,
    Neg,
}

/// Which norm bounds the free coordinates of a degree window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Linf,
    L1,
}

/// A finite set of degrees used to bound enumeration over an infinite group.
/// Torsion coordinates are always enumerated in full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub radius: i64,
    #[serde(default)]
    pub norm: Norm,
}

impl Window {
    pub fn linf(radius: i64) -> Self {
        Window { radius, norm: Norm::Linf }
    }

    pub fn l1(radius: i64) -> Self {
        Window { radius, norm: Norm::L1 }
    }

    pub fn contains(&self, spec: &GroupSpec, g: &GroupElement) -> bool {
        let free = &g.0[..spec.free_rank];
        match self.norm {
            Norm::Linf => free.iter().all(|c| c.abs() <= self.radius),
            Norm::L1 => free.iter().map(|c| c.abs()).sum::<i64>() <= self.radius,
        }
    }
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::SpecMismatch(format!("torsion order {m} < 2")));
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        GroupSpec { free_rank: 0, torsion: vec![] }
    }

    pub fn free(n: usize) -> Self {
        GroupSpec { free_rank: n, torsion: vec![] }
    }

    pub fn finite(torsion: Vec<u64>) -> Result<Self> {
        Self::new(0, torsion)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.free_rank, self.torsion.clone()).map(|_| ())
    }

    /// Number of coordinates of an element.
    pub fn len(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Modulus of coordinate `i`, or 0 for a free coordinate.
    pub fn modulus(&self, i: usize) -> u64 {
        if i < self.free_rank {
            0
        } else {
            self.torsion[i - self.free_rank]
        }
    }

    fn reduce(&self, coords: &mut [i64]) {
        for (j, &m) in self.torsion.iter().enumerate() {
            let c = &mut coords[self.free_rank + j];
            *c = c.rem_euclid(m as i64);
        }
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.len() {
            return Err(Error::SpecMismatch(format!(
                "element has {} coordinates, group needs {}",
                coords.len(),
                self.len()
            )));
        }
        let mut c: SmallVec<[i64; 4]> = coords.into();
        self.reduce(&mut c);
        Ok(GroupElement(c))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(SmallVec::from_elem(0, self.len()))
    }

    /// The i-th standard generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c: SmallVec<[i64; 4]> = SmallVec::from_elem(0, self.len());
        c[i] = 1;
        self.reduce(&mut c);
        GroupElement(c)
    }

    pub fn conforms(&self, a: &GroupElement) -> Result<()> {
        if a.0.len() != self.len() {
            return Err(Error::SpecMismatch(format!("{a} has wrong length for {self:?}")));
        }
        for (j, &m) in self.torsion.iter().enumerate() {
            let c = a.0[self.free_rank + j];
            if c < 0 || c >= m as i64 {
                return Err(Error::SpecMismatch(format!("{a}: torsion slot {j} not reduced mod {m}")));
            }
        }
        Ok(())
    }

    /// Addition without conformance checks; callers own the invariant.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut c: SmallVec<[i64; 4]> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.reduce(&mut c);
        GroupElement(c)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let mut c: SmallVec<[i64; 4]> = a.0.iter().map(|x| -x).collect();
        self.reduce(&mut c);
        GroupElement(c)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let mut c: SmallVec<[i64; 4]> = a.0.iter().map(|x| k * x).collect();
        self.reduce(&mut c);
        GroupElement(c)
    }

    /// All elements of a finite group in lexicographic order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::UnsupportedForInfiniteGroup(self.free_rank));
        }
        Ok(self.box_elements(&[]))
    }

    /// Elements whose free coordinates lie in `window`.
    pub fn window_elements(&self, window: &Window) -> Vec<GroupElement> {
        let r = window.radius;
        let ranges: Vec<(i64, i64)> = (0..self.free_rank).map(|_| (-r, r)).collect();
        self.box_elements(&ranges).into_iter().filter(|g| window.contains(self, g)).collect()
    }

    /// Elements with free coordinate `i` in `[0, period[i])`: coset
    /// representatives of `∏ period[i]·ℤ` inside the free part.
    pub fn period_representatives(&self, period: &[i64]) -> Vec<GroupElement> {
        let ranges: Vec<(i64, i64)> = period.iter().map(|&p| (0, p.max(1) - 1)).collect();
        self.box_elements(&ranges)
    }

    /// Elements with free coordinate `i` in `free_ranges[i]` (inclusive; missing
    /// ranges mean `0`) and every torsion coordinate.
    pub fn box_elements(&self, free_ranges: &[(i64, i64)]) -> Vec<GroupElement> {
        let mut ranges: Vec<(i64, i64)> = free_ranges.to_vec();
        ranges.resize(self.free_rank, (0, 0));
        ranges.extend(self.torsion.iter().map(|&m| (0, m as i64 - 1)));
        let mut out = vec![GroupElement(SmallVec::new())];
        for &(lo, hi) in &ranges {
            let mut next = Vec::with_capacity(out.len() * (hi - lo + 1) as usize);
            for g in &out {
                for c in lo..=hi {
                    let mut h = g.clone();
                    h.0.push(c);
                    next.push(h);
                }
            }
            out = next;
        }
        out
    }

    /// Appends a new coordinate: free when `modulus == 0`, else torsion.
    /// Free coordinates are kept first, so a new free slot is inserted at
    /// position `free_rank`.
    pub fn extended(&self, modulus: u64) -> Result<(GroupSpec, usize)> {
        if modulus == 0 {
            let s = GroupSpec { free_rank: self.free_rank + 1, torsion: self.torsion.clone() };
            Ok((s, self.free_rank))
        } else {
            let mut t = self.torsion.clone();
            t.push(modulus);
            let s = GroupSpec::new(self.free_rank, t)?;
            let slot = s.len() - 1;
            Ok((s, slot))
        }
    }

    /// Re-embeds an element of `self` into `self.extended(..)` (new slot 0).
    pub fn embed_into_extended(&self, g: &GroupElement, slot: usize) -> GroupElement {
        let mut c = g.0.clone();
        c.insert(slot, 0);
        GroupElement(c)
    }
}

pub fn grp_op(spec: &GroupSpec, a: &GroupElement, b: &GroupElement, op: GrpOp) -> Result<GroupElement> {
    spec.conforms(a)?;
    match op {
        GrpOp::Add => {
            spec.conforms(b)?;
            Ok(spec.add(a, b))
        }
        GrpOp::Neg => Ok(spec.neg(a)),
    }
}

/// `⟨S⟩` as a lattice in `ℤ^{n+t}` containing the torsion relations, stored
/// as a Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDesc {
    spec: GroupSpec,
    generators: Vec<GroupElement>,
    hnf: Vec<Vec<i128>>,
}

impl SubgroupDesc {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Rows of the normal form, pivots strictly increasing, pivot entries
    /// positive, entries above each pivot reduced into `[0, pivot)`.
    pub fn normal_form(&self) -> &[Vec<i128>] {
        &self.hnf
    }

    pub fn membership(&self, x: &GroupElement) -> bool {
        if self.spec.conforms(x).is_err() {
            return false;
        }
        let mut v: Vec<i128> = x.0.iter().map(|&c| c as i128).collect();
        let mut rows = self.hnf.iter().peekable();
        for c in 0..v.len() {
            match rows.peek() {
                Some(row) if pivot(row) == Some(c) => {
                    let p = row[c];
                    if v[c] % p != 0 {
                        return false;
                    }
                    let f = v[c] / p;
                    for (vj, rj) in v.iter_mut().zip(row.iter()) {
                        *vj -= f * rj;
                    }
                    rows.next();
                }
                _ => {
                    if v[c] != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn equals_whole_group(&self) -> bool {
        self.hnf.len() == self.spec.len() && self.hnf.iter().enumerate().all(|(i, r)| r[i] == 1)
    }

    /// Elements of `⟨S⟩` with free part inside `window`.
    pub fn elements_in_window(&self, window: &Window) -> Vec<GroupElement> {
        self.spec.window_elements(window).into_iter().filter(|g| self.membership(g)).collect()
    }
}

fn pivot(row: &[i128]) -> Option<usize> {
    row.iter().position(|&x| x != 0)
}

fn hermite_normal_form(mut rows: Vec<Vec<i128>>, width: usize) -> Vec<Vec<i128>> {
    let mut out: Vec<Vec<i128>> = Vec::new();
    let mut r0 = 0;
    for c in 0..width {
        // Euclid on column c among rows r0..
        loop {
            let nz: Vec<usize> = (r0..rows.len()).filter(|&r| rows[r][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let (mut best, mut bv) = (nz[0], rows[nz[0]][c].abs());
            for &r in &nz {
                if rows[r][c].abs() < bv {
                    best = r;
                    bv = rows[r][c].abs();
                }
            }
            for &r in &nz {
                if r != best {
                    let f = rows[r][c] / rows[best][c];
                    let pr = rows[best].clone();
                    for (x, p) in rows[r].iter_mut().zip(pr.iter()) {
                        *x -= f * p;
                    }
                }
            }
        }
        let Some(p) = (r0..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(r0, p);
        if rows[r0][c] < 0 {
            for x in rows[r0].iter_mut() {
                *x = -*x;
            }
        }
        r0 += 1;
    }
    rows.truncate(r0);
    // reduce entries above pivots
    for i in 0..rows.len() {
        let c = pivot(&rows[i]).unwrap();
        let p = rows[i][c];
        for k in 0..i {
            let f = rows[k][c].div_euclid(p);
            if f != 0 {
                let pr = rows[i].clone();
                for (x, y) in rows[k].iter_mut().zip(pr.iter()) {
                    *x -= f * y;
                }
            }
        }
    }
    out.extend(rows);
    out
}

pub fn subgroup_generated(spec: &GroupSpec, s: &[GroupElement]) -> Result<SubgroupDesc> {
    for g in s {
        spec.conforms(g)?;
    }
    let width = spec.len();
    let mut rows: Vec<Vec<i128>> = s.iter().map(|g| g.0.iter().map(|&c| c as i128).collect()).collect();
    for (j, &m) in spec.torsion.iter().enumerate() {
        let mut r = vec![0i128; width];
        r[spec.free_rank + j] = m as i128;
        rows.push(r);
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    Ok(SubgroupDesc { spec: spec.clone(), generators: s.to_vec(), hnf: hermite_normal_form(rows, width) })
}

/// Closure test for a subset of a finite group.
pub fn is_subgroup(spec: &GroupSpec, s: &[GroupElement]) -> Result<bool> {
    if !spec.is_finite() {
        return Err(Error::UnsupportedForInfiniteGroup(spec.free_rank));
    }
    for g in s {
        spec.conforms(g)?;
    }
    let set: std::collections::HashSet<&GroupElement> = s.iter().collect();
    if !set.contains(&spec.zero()) {
        return Ok(false);
    }
    for a in s {
        if !set.contains(&spec.neg(a)) {
            return Ok(false);
        }
        for b in s {
            if !set.contains(&spec.add(a, b)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(spec: &GroupSpec, c: &[i64]) -> GroupElement {
        spec.element(c).unwrap()
    }

    #[test]
    fn group_law() {
        let z2 = GroupSpec::free(2);
        assert_eq!(grp_op(&z2, &el(&z2, &[1, 0]), &el(&z2, &[0, 1]), GrpOp::Add).unwrap(), el(&z2, &[1, 1]));
        let c2 = GroupSpec::finite(vec![2]).unwrap();
        assert_eq!(grp_op(&c2, &el(&c2, &[1]), &el(&c2, &[1]), GrpOp::Add).unwrap(), el(&c2, &[0]));
        let k4 = GroupSpec::finite(vec![2, 2]).unwrap();
        let x = el(&k4, &[1, 1]);
        assert_eq!(grp_op(&k4, &x, &x, GrpOp::Neg).unwrap(), x);
    }

    #[test]
    fn mismatched_spec_is_rejected() {
        let z2 = GroupSpec::free(2);
        let bad = GroupElement(SmallVec::from_slice(&[1]));
        assert!(matches!(grp_op(&z2, &bad, &bad, GrpOp::Add), Err(Error::SpecMismatch(_))));
        assert!(GroupSpec::new(0, vec![1]).is_err());
    }

    #[test]
    fn membership_by_row_reduction() {
        let z2 = GroupSpec::free(2);
        let h = subgroup_generated(&z2, &[el(&z2, &[2, 0]), el(&z2, &[0, 1])]).unwrap();
        assert!(!h.membership(&el(&z2, &[1, 0])));
        assert!(h.membership(&el(&z2, &[4, -3])));
        assert!(!h.equals_whole_group());
        let trivial = subgroup_generated(&z2, &[]).unwrap();
        assert!(trivial.membership(&z2.zero()));
        assert!(!trivial.membership(&el(&z2, &[0, 1])));
    }

    #[test]
    fn torsion_generation() {
        let k4 = GroupSpec::finite(vec![2, 2]).unwrap();
        let h = subgroup_generated(&k4, &[el(&k4, &[1, 0]), el(&k4, &[0, 1])]).unwrap();
        assert!(h.equals_whole_group());
        let c6 = GroupSpec::finite(vec![6]).unwrap();
        let h = subgroup_generated(&c6, &[el(&c6, &[4])]).unwrap();
        assert!(h.membership(&el(&c6, &[2])));
        assert!(!h.membership(&el(&c6, &[3])));
        let h = subgroup_generated(&c6, &[el(&c6, &[5])]).unwrap();
        assert!(h.equals_whole_group());
    }

    #[test]
    fn subgroup_predicate() {
        let k4 = GroupSpec::finite(vec![2, 2]).unwrap();
        assert!(is_subgroup(&k4, &[el(&k4, &[0, 0]), el(&k4, &[1, 0])]).unwrap());
        assert!(!is_subgroup(&k4, &[el(&k4, &[0, 0]), el(&k4, &[1, 0]), el(&k4, &[0, 1])]).unwrap());
        assert!(!is_subgroup(&k4, &[el(&k4, &[1, 0])]).unwrap());
        assert!(matches!(
            is_subgroup(&GroupSpec::free(1), &[]),
            Err(Error::UnsupportedForInfiniteGroup(1))
        ));
    }
}
