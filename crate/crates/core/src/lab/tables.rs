//! Table-level oracle over a finite ring. Everything here is derived from
//! the addition and multiplication tables alone and uses none of the
//! library's inverse routines, so the suites can cross-check them.

use crate::error::{Error, Result};
use crate::ring::FiniteRing;

/// Element sets as bitmasks; rings above 64 elements are refused.
pub type Set = u64;

pub const MAX_TABLE_SIZE: usize = 64;

#[derive(Debug, Clone)]
pub struct Tables {
    pub n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    pub zero: u16,
    pub one: u16,
    neg: Vec<u16>,
    /// `xR`, `Rx`, `{z : xz = 0}`, `{z : zx = 0}`.
    pub img_r: Vec<Set>,
    pub img_l: Vec<Set>,
    pub ann_r: Vec<Set>,
    pub ann_l: Vec<Set>,
    /// `x{1}` for every `x`.
    pub inner: Vec<Vec<u16>>,
    pub idempotent: Vec<bool>,
    pub unit_inverse: Vec<Option<u16>>,
    /// `(a, b, c) -> a^-(b,c)` from the literal definition.
    bc: Vec<Option<u16>>,
    /// Triples where the literal definition admits more than one solution.
    pub non_unique: Vec<(u16, u16, u16)>,
}

pub fn bit(x: u16) -> Set {
    1 << x
}

pub fn subset(x: Set, y: Set) -> bool {
    x & !y == 0
}

impl Tables {
    pub fn new(ring: &FiniteRing) -> Result<Self> {
        let n = ring.size();
        if n > MAX_TABLE_SIZE {
            return Err(Error::CapExceeded(format!("table oracle handles at most {MAX_TABLE_SIZE} elements, got {n}")));
        }
        let add = ring.add_table().to_vec();
        let mul = ring.mul_table().to_vec();
        let idx = |x: usize, y: usize| x * n + y;
        let zero = (0..n).find(|&z| (0..n).all(|x| add[idx(z, x)] as usize == x)).expect("additive identity") as u16;
        let one = (0..n)
            .find(|&e| (0..n).all(|x| mul[idx(e, x)] as usize == x && mul[idx(x, e)] as usize == x))
            .expect("multiplicative identity") as u16;
        let neg = (0..n)
            .map(|x| (0..n).find(|&y| add[idx(x, y)] == zero).expect("additive inverse") as u16)
            .collect();

        let mut t = Tables {
            n,
            add,
            mul,
            zero,
            one,
            neg,
            img_r: vec![0; n],
            img_l: vec![0; n],
            ann_r: vec![0; n],
            ann_l: vec![0; n],
            inner: vec![Vec::new(); n],
            idempotent: vec![false; n],
            unit_inverse: vec![None; n],
            bc: Vec::new(),
            non_unique: Vec::new(),
        };
        for x in 0..n as u16 {
            let xi = x as usize;
            for z in 0..n as u16 {
                t.img_r[xi] |= bit(t.mul(x, z));
                t.img_l[xi] |= bit(t.mul(z, x));
                if t.mul(x, z) == zero {
                    t.ann_r[xi] |= bit(z);
                }
                if t.mul(z, x) == zero {
                    t.ann_l[xi] |= bit(z);
                }
                if t.mul3(x, z, x) == x {
                    t.inner[xi].push(z);
                }
                if t.mul(x, z) == one && t.mul(z, x) == one {
                    t.unit_inverse[xi] = Some(z);
                }
            }
            t.idempotent[xi] = t.mul(x, x) == x;
        }
        t.bc = t.literal_bc_table();
        Ok(t)
    }

    pub fn mul(&self, x: u16, y: u16) -> u16 {
        self.mul[x as usize * self.n + y as usize]
    }

    pub fn mul3(&self, x: u16, y: u16, z: u16) -> u16 {
        self.mul(self.mul(x, y), z)
    }

    pub fn prod(&self, xs: &[u16]) -> u16 {
        xs.iter().fold(self.one, |acc, &x| self.mul(acc, x))
    }

    pub fn add(&self, x: u16, y: u16) -> u16 {
        self.add[x as usize * self.n + y as usize]
    }

    pub fn sub(&self, x: u16, y: u16) -> u16 {
        self.add(x, self.neg[y as usize])
    }

    pub fn one_minus(&self, x: u16) -> u16 {
        self.sub(self.one, x)
    }

    pub fn elements(&self) -> std::ops::Range<u16> {
        0..self.n as u16
    }

    pub fn full(&self) -> Set {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn regular(&self, x: u16) -> bool {
        !self.inner[x as usize].is_empty()
    }

    /// `{x r y : r in R}`.
    pub fn sandwich(&self, x: u16, y: u16) -> Set {
        self.elements().fold(0, |s, r| s | bit(self.mul3(x, r, y)))
    }

    pub fn members(&self, s: Set) -> impl Iterator<Item = u16> + '_ {
        self.elements().filter(move |&x| s & bit(x) != 0)
    }

    /// `a^-(b,c)`: the `y` with `y ∈ bRy ∩ yRc`, `y a b = b`, `c a y = c`.
    pub fn bc(&self, a: u16, b: u16, c: u16) -> Option<u16> {
        self.bc[(a as usize * self.n + b as usize) * self.n + c as usize]
    }

    fn literal_bc_table(&mut self) -> Vec<Option<u16>> {
        let n = self.n;
        // in_left[b][y]: y ∈ bRy; in_right[y][c]: y ∈ yRc.
        let mut in_left = vec![false; n * n];
        let mut in_right = vec![false; n * n];
        for x in self.elements() {
            for y in self.elements() {
                in_left[x as usize * n + y as usize] = self.sandwich(x, y) & bit(y) != 0;
                in_right[x as usize * n + y as usize] = self.sandwich(x, y) & bit(x) != 0;
            }
        }
        let mut table = vec![None; n * n * n];
        let mut non_unique = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    let mut found = None;
                    for y in self.elements() {
                        let ok = in_left[b as usize * n + y as usize]
                            && in_right[y as usize * n + c as usize]
                            && self.mul3(y, a, b) == b
                            && self.mul3(c, a, y) == c;
                        if ok {
                            if found.is_some() {
                                non_unique.push((a, b, c));
                            }
                            found.get_or_insert(y);
                        }
                    }
                    table[(a as usize * n + b as usize) * n + c as usize] = found;
                }
            }
        }
        self.non_unique = non_unique;
        table
    }

    /// Bott-Duffin `(p,q)`-inverse straight from its defining equations:
    /// `y = p y = y q`, `y a p = p`, `q a y = q`.
    pub fn bott_duffin(&self, a: u16, p: u16, q: u16) -> Option<u16> {
        self.elements().find(|&y| {
            self.mul(p, y) == y && self.mul(y, q) == y && self.mul3(y, a, p) == p && self.mul3(q, a, y) == q
        })
    }

    /// Units of the corner ring `eRe`, paired with their corner inverses.
    pub fn corner_units(&self, e: u16) -> Vec<(u16, u16)> {
        let corner = self.sandwich(e, e);
        self.members(corner)
            .filter_map(|u| {
                self.members(corner)
                    .find(|&w| self.mul(u, w) == e && self.mul(w, u) == e)
                    .map(|w| (u, w))
            })
            .collect()
    }

    /// Every frame `(b, c, p, q)` with `b`, `c` regular, `p = b g`, `q = h c`
    /// over all inner inverses, without repeats. The inverse depends on
    /// `g`, `h` only through `p`, `q`.
    pub fn frames(&self) -> Vec<Frame> {
        // For each idempotent reachable as b g, keep the first such g.
        let reps = |x: u16, left: bool| -> Vec<(u16, u16)> {
            let mut out: Vec<(u16, u16)> = Vec::new();
            for &g in &self.inner[x as usize] {
                let e = if left { self.mul(x, g) } else { self.mul(g, x) };
                if !out.iter().any(|&(f, _)| f == e) {
                    out.push((e, g));
                }
            }
            out.sort_unstable();
            out
        };
        let mut out = Vec::new();
        for b in self.elements().filter(|&b| self.regular(b)) {
            let ps = reps(b, true);
            for c in self.elements().filter(|&c| self.regular(c)) {
                let qs = reps(c, false);
                for &(p, g) in &ps {
                    for &(q, h) in &qs {
                        out.push(Frame { b, c, p, q, g, h });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Frame {
    pub b: u16,
    pub c: u16,
    pub p: u16,
    pub q: u16,
    /// A representative inner inverse with `b g = p`, and `h` with `h c = q`.
    pub g: u16,
    pub h: u16,
}
