//! Built-in group registry behind a uniform interface.
//!
//! Each [`GroupDescriptor`] names a concrete group from the zoo (free abelian,
//! Heisenberg, Engel, and their semidirect extensions by a small finite
//! group), and provides multiplication, inversion, the abelianization map on
//! the nilpotent kernel, the coset map to the finite quotient, the induced
//! integer action on the abelianization, and a compact injective byte
//! encoding used for exact deduplication in searches.

use crate::engel::EngelElement;
use crate::geom::VecQ;
use crate::rat::{fmt_rat, rat_int, Rational};
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element does not belong to the group family `{group}`")]
    FamilyMismatch { group: String },
    #[error("element is not in the nilpotent kernel (nontrivial coset)")]
    NotInSubgroup,
    #[error("malformed element encoding")]
    BadEncoding,
}

/// Index into a finite group's element table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteElement(pub usize);

impl FiniteElement {
    pub const IDENTITY: FiniteElement = FiniteElement(0);

    pub fn is_identity(&self) -> bool {
        self.0 == 0
    }
}

/// A finite group given by its full multiplication table; identity at index 0.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Self {
        let n = names.len();
        assert!(n >= 1 && mul.len() == n && mul.iter().all(|r| r.len() == n));
        let inv = (0..n)
            .map(|i| (0..n).find(|&j| mul[i][j] == 0).expect("not a group"))
            .collect();
        FiniteGroup { names, mul, inv }
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec!["e".into()], vec![vec![0]])
    }

    /// Order 2 with the nontrivial element named `t_name`.
    pub fn c2(t_name: &str) -> Self {
        FiniteGroup::new(
            vec!["e".into(), t_name.into()],
            vec![vec![0, 1], vec![1, 0]],
        )
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, f: FiniteElement) -> &str {
        &self.names[f.0]
    }

    pub fn mul(&self, a: FiniteElement, b: FiniteElement) -> FiniteElement {
        FiniteElement(self.mul[a.0][b.0])
    }

    pub fn inv(&self, a: FiniteElement) -> FiniteElement {
        FiniteElement(self.inv[a.0])
    }
}

/// Element of one of the registry groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    /// Integer lattice point.
    Zd(Vec<BigInt>),
    /// Heisenberg element in the symmetric model: `z` is a half-integer and
    /// the product is `(x1+x2, y1+y2, z1+z2+det((x1,y1),(x2,y2))/2)`.
    Heis { x: BigInt, y: BigInt, z: Rational },
    Engel(EngelElement),
    /// Semidirect pair `(base, f)`; `f` acts on the base on the left of the
    /// second factor: `(b1,f1)(b2,f2) = (b1 * act(f1)(b2), f1 f2)`.
    Semi {
        base: Box<GroupElement>,
        finite: FiniteElement,
    },
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Zd(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupElement::Heis { x, y, z } => write!(f, "x={x} y={y} z={}", fmt_rat(z)),
            GroupElement::Engel(e) => write!(f, "{e}"),
            GroupElement::Semi { base, finite } => write!(f, "{base} coset={}", finite.0),
        }
    }
}

/// Which nilpotent kernel the group is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseFamily {
    Zd(usize),
    Heis,
    Engel,
}

/// How a finite-group element acts on base elements.
#[derive(Debug, Clone)]
enum BaseAction {
    Identity,
    /// Integer matrix acting on lattice coordinates.
    ZdLinear(Vec<Vec<i64>>),
    /// `(x, y, z) -> (y, x, -z)`, the Heisenberg coordinate swap.
    HeisSwapNegate,
    /// Reflection across the y-axis in the path model.
    EngelReflect,
}

/// A registry group: the kernel family, its lower-central-series data, the
/// finite quotient with its actions, and the canonical generating letters.
#[derive(Debug, Clone)]
pub struct GroupDescriptor {
    name: String,
    base: BaseFamily,
    class_s: u32,
    lcs_ranks: Vec<u32>,
    ab_dim: usize,
    finite: FiniteGroup,
    base_actions: Vec<BaseAction>,
    ab_actions: Vec<Vec<Vec<i64>>>,
    letters: Vec<(String, GroupElement)>,
}

impl GroupDescriptor {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_family(&self) -> BaseFamily {
        self.base
    }

    /// Nilpotency class of the kernel.
    pub fn class_s(&self) -> u32 {
        self.class_s
    }

    /// Ranks of the lower-central-series quotients of the kernel.
    pub fn lcs_ranks(&self) -> &[u32] {
        &self.lcs_ranks
    }

    /// Dimension of the abelianization of the kernel.
    pub fn ab_dim(&self) -> usize {
        self.ab_dim
    }

    pub fn finite(&self) -> &FiniteGroup {
        &self.finite
    }

    /// Index of the kernel, `[G : H]`.
    pub fn kernel_index(&self) -> usize {
        self.finite.size()
    }

    /// Canonical generating letters `(name, element)`, all of weight 1.
    pub fn letters(&self) -> &[(String, GroupElement)] {
        &self.letters
    }

    /// Bass-Guivarc'h exponent `d = sum_i i * rank(gamma_i / gamma_{i+1})`.
    pub fn bass_guivarch(&self) -> u64 {
        self.lcs_ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (i as u64 + 1) * r as u64)
            .sum()
    }

    fn is_semi(&self) -> bool {
        self.finite.size() > 1
    }

    fn base_belongs(&self, g: &GroupElement) -> bool {
        match (self.base, g) {
            (BaseFamily::Zd(d), GroupElement::Zd(c)) => c.len() == d,
            (BaseFamily::Heis, GroupElement::Heis { .. }) => true,
            (BaseFamily::Engel, GroupElement::Engel(_)) => true,
            _ => false,
        }
    }

    fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        let ok = if self.is_semi() {
            match g {
                GroupElement::Semi { base, finite } => {
                    finite.0 < self.finite.size() && self.base_belongs(base)
                }
                _ => false,
            }
        } else {
            self.base_belongs(g)
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::FamilyMismatch {
                group: self.name.clone(),
            })
        }
    }

    pub fn id(&self) -> GroupElement {
        let base = self.base_id();
        if self.is_semi() {
            GroupElement::Semi {
                base: Box::new(base),
                finite: FiniteElement::IDENTITY,
            }
        } else {
            base
        }
    }

    fn base_id(&self) -> GroupElement {
        match self.base {
            BaseFamily::Zd(d) => GroupElement::Zd(vec![BigInt::zero(); d]),
            BaseFamily::Heis => GroupElement::Heis {
                x: BigInt::zero(),
                y: BigInt::zero(),
                z: rat_int(0),
            },
            BaseFamily::Engel => GroupElement::Engel(EngelElement::identity()),
        }
    }

    fn base_mul(g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Zd(a), GroupElement::Zd(b)) => {
                GroupElement::Zd(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (
                GroupElement::Heis { x: x1, y: y1, z: z1 },
                GroupElement::Heis { x: x2, y: y2, z: z2 },
            ) => {
                let det = Rational::from_integer(x1 * y2 - y1 * x2);
                GroupElement::Heis {
                    x: x1 + x2,
                    y: y1 + y2,
                    z: z1 + z2 + det / rat_int(2),
                }
            }
            (GroupElement::Engel(a), GroupElement::Engel(b)) => GroupElement::Engel(a.mul(b)),
            _ => unreachable!("family checked by caller"),
        }
    }

    fn base_inv(g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Zd(a) => GroupElement::Zd(a.iter().map(|x| -x).collect()),
            GroupElement::Heis { x, y, z } => GroupElement::Heis {
                x: -x,
                y: -y,
                z: -z,
            },
            GroupElement::Engel(a) => GroupElement::Engel(a.inv()),
            GroupElement::Semi { .. } => unreachable!(),
        }
    }

    fn act_base(&self, f: FiniteElement, g: &GroupElement) -> GroupElement {
        match (&self.base_actions[f.0], g) {
            (BaseAction::Identity, _) => g.clone(),
            (BaseAction::ZdLinear(m), GroupElement::Zd(c)) => GroupElement::Zd(
                m.iter()
                    .map(|row| {
                        row.iter()
                            .zip(c)
                            .map(|(&a, x)| BigInt::from(a) * x)
                            .fold(BigInt::zero(), |s, v| s + v)
                    })
                    .collect(),
            ),
            (BaseAction::HeisSwapNegate, GroupElement::Heis { x, y, z }) => GroupElement::Heis {
                x: y.clone(),
                y: x.clone(),
                z: -z,
            },
            (BaseAction::EngelReflect, GroupElement::Engel(e)) => GroupElement::Engel(e.reflect()),
            _ => unreachable!("action matches base family by construction"),
        }
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        match (g, h) {
            (
                GroupElement::Semi { base: b1, finite: f1 },
                GroupElement::Semi { base: b2, finite: f2 },
            ) => Ok(GroupElement::Semi {
                base: Box::new(Self::base_mul(b1, &self.act_base(*f1, b2))),
                finite: self.finite.mul(*f1, *f2),
            }),
            _ => Ok(Self::base_mul(g, h)),
        }
    }

    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        match g {
            GroupElement::Semi { base, finite } => {
                let fi = self.finite.inv(*finite);
                Ok(GroupElement::Semi {
                    base: Box::new(self.act_base(fi, &Self::base_inv(base))),
                    finite: fi,
                })
            }
            _ => Ok(Self::base_inv(g)),
        }
    }

    pub fn pow(&self, g: &GroupElement, n: u64) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        let mut acc = self.id();
        let mut base = g.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            if n > 1 {
                base = self.mul(&base, &base)?;
            }
            n >>= 1;
        }
        Ok(acc)
    }

    /// Coset of `g` in the finite quotient.
    pub fn coset(&self, g: &GroupElement) -> FiniteElement {
        match g {
            GroupElement::Semi { finite, .. } => *finite,
            _ => FiniteElement::IDENTITY,
        }
    }

    /// Abelianization coordinates of an element of the kernel.
    pub fn pi_ab(&self, g: &GroupElement) -> Result<VecQ, GroupError> {
        self.check(g)?;
        if !self.coset(g).is_identity() {
            return Err(GroupError::NotInSubgroup);
        }
        let base = match g {
            GroupElement::Semi { base, .. } => base,
            other => other,
        };
        Ok(match base {
            GroupElement::Zd(c) => {
                VecQ::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect())
            }
            GroupElement::Heis { x, y, .. } => VecQ::new(vec![
                Rational::from_integer(x.clone()),
                Rational::from_integer(y.clone()),
            ]),
            GroupElement::Engel(e) => VecQ::new(vec![e.x.clone(), e.y.clone()]),
            GroupElement::Semi { .. } => unreachable!(),
        })
    }

    /// Element rendering with the finite part shown by name.
    pub fn display_element(&self, g: &GroupElement) -> String {
        match g {
            GroupElement::Semi { base, finite } => {
                format!("{base} coset={}", self.finite.name(*finite))
            }
            other => format!("{other}"),
        }
    }

    /// Integer action of `f` on abelianization points.
    pub fn act_point(&self, f: FiniteElement, p: &VecQ) -> VecQ {
        let m = &self.ab_actions[f.0];
        VecQ::new(
            m.iter()
                .map(|row| {
                    row.iter()
                        .zip(p.coords())
                        .map(|(&a, x)| rat_int(a) * x)
                        .fold(rat_int(0), |s, v| s + v)
                })
                .collect(),
        )
    }

    // -- canonical byte encoding ------------------------------------------

    /// Injective, self-delimiting encoding; equal elements encode equally and
    /// `decode(encode(g)) == g`.
    pub fn encode(&self, g: &GroupElement) -> Vec<u8> {
        let mut out = Vec::with_capacity(24);
        encode_element(g, &mut out);
        out
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<GroupElement, GroupError> {
        let mut pos = 0;
        let g = self.decode_at(bytes, &mut pos, self.is_semi())?;
        if pos != bytes.len() {
            return Err(GroupError::BadEncoding);
        }
        Ok(g)
    }

    fn decode_at(
        &self,
        bytes: &[u8],
        pos: &mut usize,
        semi: bool,
    ) -> Result<GroupElement, GroupError> {
        if semi {
            let base = self.decode_at(bytes, pos, false)?;
            let f = *bytes.get(*pos).ok_or(GroupError::BadEncoding)? as usize;
            *pos += 1;
            if f >= self.finite.size() {
                return Err(GroupError::BadEncoding);
            }
            return Ok(GroupElement::Semi {
                base: Box::new(base),
                finite: FiniteElement(f),
            });
        }
        match self.base {
            BaseFamily::Zd(d) => {
                let mut c = Vec::with_capacity(d);
                for _ in 0..d {
                    c.push(decode_bigint(bytes, pos)?);
                }
                Ok(GroupElement::Zd(c))
            }
            BaseFamily::Heis => Ok(GroupElement::Heis {
                x: decode_bigint(bytes, pos)?,
                y: decode_bigint(bytes, pos)?,
                z: decode_rational(bytes, pos)?,
            }),
            BaseFamily::Engel => Ok(GroupElement::Engel(EngelElement::new(
                decode_rational(bytes, pos)?,
                decode_rational(bytes, pos)?,
                decode_rational(bytes, pos)?,
                decode_rational(bytes, pos)?,
            ))),
        }
    }
}

fn encode_element(g: &GroupElement, out: &mut Vec<u8>) {
    match g {
        GroupElement::Zd(c) => {
            for x in c {
                encode_bigint(x, out);
            }
        }
        GroupElement::Heis { x, y, z } => {
            encode_bigint(x, out);
            encode_bigint(y, out);
            encode_rational(z, out);
        }
        GroupElement::Engel(e) => {
            encode_rational(&e.x, out);
            encode_rational(&e.y, out);
            encode_rational(&e.area, out);
            encode_rational(&e.moment, out);
        }
        GroupElement::Semi { base, finite } => {
            encode_element(base, out);
            out.push(finite.0 as u8);
        }
    }
}

fn encode_bigint(v: &BigInt, out: &mut Vec<u8>) {
    let (sign, mag) = v.to_bytes_le();
    match sign {
        Sign::NoSign => out.push(0),
        Sign::Plus => out.push(1),
        Sign::Minus => out.push(2),
    }
    if sign == Sign::NoSign {
        return;
    }
    debug_assert!(mag.last() != Some(&0));
    encode_varint(mag.len() as u64, out);
    out.extend_from_slice(&mag);
}

fn decode_bigint(bytes: &[u8], pos: &mut usize) -> Result<BigInt, GroupError> {
    let tag = *bytes.get(*pos).ok_or(GroupError::BadEncoding)?;
    *pos += 1;
    let sign = match tag {
        0 => return Ok(BigInt::zero()),
        1 => Sign::Plus,
        2 => Sign::Minus,
        _ => return Err(GroupError::BadEncoding),
    };
    let len = decode_varint(bytes, pos)? as usize;
    let end = pos.checked_add(len).ok_or(GroupError::BadEncoding)?;
    let mag = bytes.get(*pos..end).ok_or(GroupError::BadEncoding)?;
    if len == 0 || mag.last() == Some(&0) {
        return Err(GroupError::BadEncoding); // non-canonical
    }
    *pos = end;
    Ok(BigInt::from_bytes_le(sign, mag))
}

fn encode_rational(v: &Rational, out: &mut Vec<u8>) {
    encode_bigint(v.numer(), out);
    encode_bigint(v.denom(), out);
}

fn decode_rational(bytes: &[u8], pos: &mut usize) -> Result<Rational, GroupError> {
    let n = decode_bigint(bytes, pos)?;
    let d = decode_bigint(bytes, pos)?;
    if !d.is_positive() {
        return Err(GroupError::BadEncoding);
    }
    let r = Rational::new(n.clone(), d.clone());
    if r.numer() != &n || r.denom() != &d {
        return Err(GroupError::BadEncoding); // not reduced
    }
    Ok(r)
}

fn encode_varint(mut v: u64, out: &mut Vec<u8>) {
    loop {
        let b = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

fn decode_varint(bytes: &[u8], pos: &mut usize) -> Result<u64, GroupError> {
    let mut v = 0u64;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos).ok_or(GroupError::BadEncoding)?;
        *pos += 1;
        v |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
        shift += 7;
        if shift >= 64 {
            return Err(GroupError::BadEncoding);
        }
    }
}

// ---------------------------------------------------------------------------
// The registry.
// ---------------------------------------------------------------------------

fn zd_letter(d: usize, i: usize, sign: i64) -> GroupElement {
    let mut c = vec![BigInt::zero(); d];
    c[i] = BigInt::from(sign);
    GroupElement::Zd(c)
}

fn semi_base(desc_base: GroupElement) -> GroupElement {
    GroupElement::Semi {
        base: Box::new(desc_base),
        finite: FiniteElement::IDENTITY,
    }
}

fn semi_twist(desc_base: GroupElement, f: usize) -> GroupElement {
    GroupElement::Semi {
        base: Box::new(desc_base),
        finite: FiniteElement(f),
    }
}

fn build_registry() -> Vec<GroupDescriptor> {
    let heis = |x: i64, y: i64| GroupElement::Heis {
        x: BigInt::from(x),
        y: BigInt::from(y),
        z: rat_int(0),
    };
    let id2 = vec![vec![1, 0], vec![0, 1]];
    let swap2 = vec![vec![0, 1], vec![1, 0]];
    let neg2 = vec![vec![-1, 0], vec![0, -1]];
    let reflect2 = vec![vec![-1, 0], vec![0, 1]];

    vec![
        GroupDescriptor {
            name: "Z1".into(),
            base: BaseFamily::Zd(1),
            class_s: 1,
            lcs_ranks: vec![1],
            ab_dim: 1,
            finite: FiniteGroup::trivial(),
            base_actions: vec![BaseAction::Identity],
            ab_actions: vec![vec![vec![1]]],
            letters: vec![
                ("a".into(), zd_letter(1, 0, 1)),
                ("a^-1".into(), zd_letter(1, 0, -1)),
            ],
        },
        GroupDescriptor {
            name: "Z2".into(),
            base: BaseFamily::Zd(2),
            class_s: 1,
            lcs_ranks: vec![2],
            ab_dim: 2,
            finite: FiniteGroup::trivial(),
            base_actions: vec![BaseAction::Identity],
            ab_actions: vec![id2.clone()],
            letters: vec![
                ("x".into(), zd_letter(2, 0, 1)),
                ("x^-1".into(), zd_letter(2, 0, -1)),
                ("y".into(), zd_letter(2, 1, 1)),
                ("y^-1".into(), zd_letter(2, 1, -1)),
            ],
        },
        GroupDescriptor {
            name: "H3".into(),
            base: BaseFamily::Heis,
            class_s: 2,
            lcs_ranks: vec![2, 1],
            ab_dim: 2,
            finite: FiniteGroup::trivial(),
            base_actions: vec![BaseAction::Identity],
            ab_actions: vec![id2.clone()],
            letters: vec![
                ("a".into(), heis(1, 0)),
                ("a^-1".into(), heis(-1, 0)),
                ("b".into(), heis(0, 1)),
                ("b^-1".into(), heis(0, -1)),
            ],
        },
        GroupDescriptor {
            name: "Engel".into(),
            base: BaseFamily::Engel,
            class_s: 3,
            lcs_ranks: vec![2, 1, 1],
            ab_dim: 2,
            finite: FiniteGroup::trivial(),
            base_actions: vec![BaseAction::Identity],
            ab_actions: vec![id2.clone()],
            letters: vec![
                ("a".into(), GroupElement::Engel(EngelElement::gen_a())),
                (
                    "a^-1".into(),
                    GroupElement::Engel(EngelElement::gen_a().inv()),
                ),
                ("b".into(), GroupElement::Engel(EngelElement::gen_b())),
                (
                    "b^-1".into(),
                    GroupElement::Engel(EngelElement::gen_b().inv()),
                ),
            ],
        },
        GroupDescriptor {
            name: "vZ".into(),
            base: BaseFamily::Zd(2),
            class_s: 1,
            lcs_ranks: vec![2],
            ab_dim: 2,
            finite: FiniteGroup::c2("t"),
            base_actions: vec![BaseAction::Identity, BaseAction::ZdLinear(swap2.clone())],
            ab_actions: vec![id2.clone(), swap2.clone()],
            letters: vec![
                ("a".into(), semi_base(zd_letter(2, 0, 1))),
                ("a^-1".into(), semi_base(zd_letter(2, 0, -1))),
                ("t".into(), semi_twist(zd_letter(2, 0, 0), 1)),
            ],
        },
        GroupDescriptor {
            name: "vH".into(),
            base: BaseFamily::Heis,
            class_s: 2,
            lcs_ranks: vec![2, 1],
            ab_dim: 2,
            finite: FiniteGroup::c2("t"),
            base_actions: vec![BaseAction::Identity, BaseAction::HeisSwapNegate],
            ab_actions: vec![id2.clone(), swap2],
            letters: vec![
                ("a".into(), semi_base(heis(1, 0))),
                ("a^-1".into(), semi_base(heis(-1, 0))),
                ("t".into(), semi_twist(heis(0, 0), 1)),
            ],
        },
        GroupDescriptor {
            name: "vE".into(),
            base: BaseFamily::Engel,
            class_s: 3,
            lcs_ranks: vec![2, 1, 1],
            ab_dim: 2,
            finite: FiniteGroup::c2("t"),
            base_actions: vec![BaseAction::Identity, BaseAction::EngelReflect],
            ab_actions: vec![id2.clone(), reflect2],
            letters: vec![
                (
                    "a".into(),
                    semi_base(GroupElement::Engel(EngelElement::gen_a())),
                ),
                (
                    "a^-1".into(),
                    semi_base(GroupElement::Engel(EngelElement::gen_a().inv())),
                ),
                (
                    "t".into(),
                    semi_twist(GroupElement::Engel(EngelElement::identity()), 1),
                ),
            ],
        },
        GroupDescriptor {
            name: "G2rot".into(),
            base: BaseFamily::Zd(2),
            class_s: 1,
            lcs_ranks: vec![2],
            ab_dim: 2,
            finite: FiniteGroup::c2("r"),
            base_actions: vec![BaseAction::Identity, BaseAction::ZdLinear(neg2.clone())],
            ab_actions: vec![id2, neg2],
            letters: vec![
                ("x".into(), semi_base(zd_letter(2, 0, 1))),
                ("y".into(), semi_base(zd_letter(2, 1, 1))),
                // c = (xy)^-1
                (
                    "c".into(),
                    semi_base(GroupElement::Zd(vec![BigInt::from(-1), BigInt::from(-1)])),
                ),
                ("r".into(), semi_twist(zd_letter(2, 0, 0), 1)),
            ],
        },
    ]
}

/// All built-in groups: Z1, Z2, H3, Engel, vZ, vH, vE, G2rot.
pub fn registry() -> &'static [GroupDescriptor] {
    static REG: OnceLock<Vec<GroupDescriptor>> = OnceLock::new();
    REG.get_or_init(build_registry)
}

pub fn lookup(name: &str) -> Option<&'static GroupDescriptor> {
    registry().iter().find(|d| d.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn desc(name: &str) -> &'static GroupDescriptor {
        lookup(name).unwrap()
    }

    fn letter(d: &GroupDescriptor, name: &str) -> GroupElement {
        d.letters()
            .iter()
            .find(|(n, _)| n == name)
            .unwrap()
            .1
            .clone()
    }

    #[test]
    fn registry_names() {
        let names: Vec<&str> = registry().iter().map(|d| d.name()).collect();
        assert_eq!(names, ["Z1", "Z2", "H3", "Engel", "vZ", "vH", "vE", "G2rot"]);
    }

    #[test]
    fn identity_laws() {
        for d in registry() {
            let e = d.id();
            for (_, g) in d.letters() {
                assert_eq!(d.mul(g, &e).unwrap(), *g);
                assert_eq!(d.mul(&e, g).unwrap(), *g);
                let gi = d.inv(g).unwrap();
                assert_eq!(d.mul(g, &gi).unwrap(), e);
                assert_eq!(d.mul(&gi, g).unwrap(), e);
            }
        }
    }

    #[test]
    fn ve_conjugation_is_reflection() {
        // t a t = b^-1 as Engel part.
        let d = desc("vE");
        let a = letter(d, "a");
        let t = letter(d, "t");
        let tat = d.mul(&d.mul(&t, &a).unwrap(), &t).unwrap();
        let expected = GroupElement::Semi {
            base: Box::new(GroupElement::Engel(EngelElement::gen_b().inv())),
            finite: FiniteElement::IDENTITY,
        };
        assert_eq!(tat, expected);
        match &tat {
            GroupElement::Semi { base, .. } => match base.as_ref() {
                GroupElement::Engel(e) => assert_eq!(*e, EngelElement::gen_a().reflect()),
                _ => panic!(),
            },
            _ => panic!(),
        }
    }

    #[test]
    fn heisenberg_triple_products_match_area_formula() {
        // z(h1 h2 h3) = sum z(h_i) + sum_{i<j} det(pi(h_i), pi(h_j)) / 2
        let d = desc("H3");
        let mut state = 1u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64 % 9) - 4
        };
        for _ in 0..100 {
            let hs: Vec<GroupElement> = (0..3)
                .map(|_| GroupElement::Heis {
                    x: BigInt::from(rnd()),
                    y: BigInt::from(rnd()),
                    z: rat(rnd(), 2),
                })
                .collect();
            let prod = d
                .mul(&d.mul(&hs[0], &hs[1]).unwrap(), &hs[2])
                .unwrap();
            let mut z = rat_int(0);
            for h in &hs {
                if let GroupElement::Heis { z: zi, .. } = h {
                    z += zi;
                }
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let (pi, pj) = (d.pi_ab(&hs[i]).unwrap(), d.pi_ab(&hs[j]).unwrap());
                    z += (pi.get(0) * pj.get(1) - pi.get(1) * pj.get(0)) / rat_int(2);
                }
            }
            match prod {
                GroupElement::Heis { z: zp, .. } => assert_eq!(zp, z),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn pi_ab_examples() {
        let d = desc("Engel");
        assert_eq!(d.pi_ab(&letter(d, "a")).unwrap(), VecQ::from_ints(&[1, 1]));
        assert_eq!(d.pi_ab(&d.id()).unwrap(), VecQ::from_ints(&[0, 0]));
        assert_eq!(
            d.pi_ab(&letter(d, "b^-1")).unwrap(),
            VecQ::from_ints(&[-1, 1])
        );
        let ve = desc("vE");
        assert_eq!(
            ve.pi_ab(&letter(ve, "t")).unwrap_err(),
            GroupError::NotInSubgroup
        );
    }

    #[test]
    fn act_point_examples() {
        let ve = desc("vE");
        assert_eq!(
            ve.act_point(FiniteElement(1), &VecQ::from_ints(&[1, 1])),
            VecQ::from_ints(&[-1, 1])
        );
        assert_eq!(
            ve.act_point(FiniteElement::IDENTITY, &VecQ::from_ints(&[3, -2])),
            VecQ::from_ints(&[3, -2])
        );
        let g2 = desc("G2rot");
        assert_eq!(
            g2.act_point(FiniteElement(1), &VecQ::from_ints(&[1, 0])),
            VecQ::from_ints(&[-1, 0])
        );
    }

    #[test]
    fn conjugation_compatibility() {
        // pi(f h f^-1) = act(f)(pi(h)) for kernel elements h.
        for name in ["vZ", "vH", "vE", "G2rot"] {
            let d = desc(name);
            let f_rep = d
                .letters()
                .iter()
                .find(|(_, g)| !d.coset(g).is_identity())
                .unwrap()
                .1
                .clone();
            for (_, g) in d.letters() {
                if !d.coset(g).is_identity() {
                    continue;
                }
                let conj = d
                    .mul(&d.mul(&f_rep, g).unwrap(), &d.inv(&f_rep).unwrap())
                    .unwrap();
                assert_eq!(
                    d.pi_ab(&conj).unwrap(),
                    d.act_point(d.coset(&f_rep), &d.pi_ab(g).unwrap()),
                    "in {name}"
                );
            }
        }
    }

    #[test]
    fn bass_guivarch_values() {
        assert_eq!(desc("Z2").bass_guivarch(), 2);
        assert_eq!(desc("H3").bass_guivarch(), 4);
        assert_eq!(desc("Engel").bass_guivarch(), 7);
        assert_eq!(desc("vE").bass_guivarch(), 7);
    }

    #[test]
    fn family_mismatch() {
        let z2 = desc("Z2");
        let h = desc("H3").id();
        assert!(matches!(
            z2.mul(&z2.id(), &h),
            Err(GroupError::FamilyMismatch { .. })
        ));
        assert!(matches!(
            z2.mul(&z2.id(), &desc("Z1").id()),
            Err(GroupError::FamilyMismatch { .. })
        ));
    }

    #[test]
    fn encode_decode_round_trip() {
        for d in registry() {
            let mut g = d.id();
            for (_, l) in d.letters() {
                g = d.mul(&g, l).unwrap();
                let bytes = d.encode(&g);
                assert_eq!(d.decode(&bytes).unwrap(), g);
            }
        }
        // Rational components round-trip too.
        let d = desc("Engel");
        let g = GroupElement::Engel(EngelElement::new(
            rat_int(-3),
            rat_int(7),
            rat(9, 2),
            rat(-35, 6),
        ));
        assert_eq!(d.decode(&d.encode(&g)).unwrap(), g);
        assert!(d.decode(&[1, 2, 3]).is_err());
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let d = desc("vE");
        let a = letter(d, "a");
        let mut acc = d.id();
        for n in 0..8u64 {
            assert_eq!(d.pow(&a, n).unwrap(), acc);
            acc = d.mul(&acc, &a).unwrap();
        }
    }
}
