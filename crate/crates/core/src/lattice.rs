//! Configurations over ordered finite alphabets, lattice operations,
//! Hamming and intrinsic metrics, regions, increasing functions and up-sets.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{invalid, rejected, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Bits(Vec<u64>),
    Bytes(Vec<u8>),
}

/// A point of A^N with A = {0, …, |A|−1}. Binary configurations are packed
/// 64 coordinates per word; other alphabets store one byte per coordinate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    alphabet: u8,
    len: usize,
    repr: Repr,
}

impl SpinConfig {
    pub fn zeros(alphabet_size: u8, n: usize) -> Self {
        assert!(alphabet_size >= 1, "alphabet must be non-empty");
        let repr = if alphabet_size == 2 {
            Repr::Bits(vec![0; n.div_ceil(64)])
        } else {
            Repr::Bytes(vec![0; n])
        };
        Self { alphabet: alphabet_size, len: n, repr }
    }

    pub fn ones(n: usize) -> Self {
        let mut x = Self::zeros(2, n);
        for i in 0..n {
            x.set(i, 1);
        }
        x
    }

    pub fn from_values(alphabet_size: u8, values: &[u8]) -> Result<Self> {
        if alphabet_size == 0 {
            return invalid("alphabet size must be positive");
        }
        if let Some(v) = values.iter().find(|&&v| v >= alphabet_size) {
            return invalid(format!("symbol {v} outside alphabet of size {alphabet_size}"));
        }
        let mut x = Self::zeros(alphabet_size, values.len());
        for (i, &v) in values.iter().enumerate() {
            x.set(i, v);
        }
        Ok(x)
    }

    /// Binary configuration whose coordinate i is bit i of `index`.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n <= 64);
        let mut x = Self::zeros(2, n);
        if n > 0 {
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            if let Repr::Bits(w) = &mut x.repr {
                w[0] = index & mask;
            }
        }
        x
    }

    /// Inverse of [`SpinConfig::from_index`]; `None` unless binary with N ≤ 64.
    pub fn to_index(&self) -> Option<u64> {
        match &self.repr {
            Repr::Bits(w) if self.len <= 64 => Some(w.first().copied().unwrap_or(0)),
            _ => None,
        }
    }

    pub fn dimension(&self) -> usize {
        self.len
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet
    }

    pub fn is_binary(&self) -> bool {
        matches!(self.repr, Repr::Bits(_))
    }

    /// Packed words for binary configurations.
    pub fn words(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Bits(w) => Some(w),
            Repr::Bytes(_) => None,
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        match &self.repr {
            Repr::Bits(w) => ((w[i >> 6] >> (i & 63)) & 1) as u8,
            Repr::Bytes(b) => b[i],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u8) {
        debug_assert!(i < self.len && v < self.alphabet);
        match &mut self.repr {
            Repr::Bits(w) => {
                let bit = 1u64 << (i & 63);
                if v == 1 {
                    w[i >> 6] |= bit;
                } else {
                    w[i >> 6] &= !bit;
                }
            }
            Repr::Bytes(b) => b[i] = v,
        }
    }

    /// Copy with coordinate i set to v.
    pub fn with(&self, i: usize, v: u8) -> Self {
        let mut y = self.clone();
        y.set(i, v);
        y
    }

    pub fn values(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Σ_i x_i (the number of ones for binary configurations).
    pub fn sum(&self) -> u64 {
        match &self.repr {
            Repr::Bits(w) => w.iter().map(|x| x.count_ones() as u64).sum(),
            Repr::Bytes(b) => b.iter().map(|&x| x as u64).sum(),
        }
    }

    /// Coordinate mean m(x) = (1/N) Σ x_i.
    pub fn magnetization(&self) -> f64 {
        self.sum() as f64 / self.len as f64
    }

    /// Coordinate-wise x ≤ y. Panics on shape mismatch.
    pub fn leq(&self, other: &Self) -> bool {
        assert!(self.same_shape(other));
        match (&self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => a.iter().zip(b).all(|(x, y)| x & !y == 0),
            (Repr::Bytes(a), Repr::Bytes(b)) => a.iter().zip(b).all(|(x, y)| x <= y),
            _ => unreachable!(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.len == other.len
    }
}

impl fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinConfig(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet <= 10 {
            for i in 0..self.len {
                write!(f, "{}", self.get(i))?;
            }
            Ok(())
        } else {
            let v: Vec<String> = self.values().iter().map(|x| x.to_string()).collect();
            write!(f, "{}", v.join(","))
        }
    }
}

impl Serialize for SpinConfig {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn check_shape(x: &SpinConfig, y: &SpinConfig) -> Result<()> {
    if x.alphabet != y.alphabet {
        return invalid(format!("alphabet mismatch: {} vs {}", x.alphabet, y.alphabet));
    }
    if x.len != y.len {
        return invalid(format!("dimension mismatch: {} vs {}", x.len, y.len));
    }
    Ok(())
}

fn combine(x: &SpinConfig, y: &SpinConfig, word: fn(u64, u64) -> u64, byte: fn(u8, u8) -> u8) -> Result<SpinConfig> {
    check_shape(x, y)?;
    let repr = match (&x.repr, &y.repr) {
        (Repr::Bits(a), Repr::Bits(b)) => Repr::Bits(a.iter().zip(b).map(|(&p, &q)| word(p, q)).collect()),
        (Repr::Bytes(a), Repr::Bytes(b)) => Repr::Bytes(a.iter().zip(b).map(|(&p, &q)| byte(p, q)).collect()),
        _ => unreachable!(),
    };
    Ok(SpinConfig { alphabet: x.alphabet, len: x.len, repr })
}

/// Coordinate-wise minimum.
pub fn meet(x: &SpinConfig, y: &SpinConfig) -> Result<SpinConfig> {
    combine(x, y, |a, b| a & b, u8::min)
}

/// Coordinate-wise maximum.
pub fn join(x: &SpinConfig, y: &SpinConfig) -> Result<SpinConfig> {
    combine(x, y, |a, b| a | b, u8::max)
}

/// Number of coordinates at which x and y differ.
pub fn hamming(x: &SpinConfig, y: &SpinConfig) -> Result<u64> {
    check_shape(x, y)?;
    Ok(match (&x.repr, &y.repr) {
        (Repr::Bits(a), Repr::Bits(b)) => a.iter().zip(b).map(|(p, q)| (p ^ q).count_ones() as u64).sum(),
        (Repr::Bytes(a), Repr::Bytes(b)) => a.iter().zip(b).filter(|(p, q)| p != q).count() as u64,
        _ => unreachable!(),
    })
}

/// A nonnegative integer distance or the INFINITE sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn as_f64(self) -> f64 {
        match self {
            Distance::Finite(d) => d as f64,
            Distance::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d),
            Distance::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

type Predicate = Arc<dyn Fn(&SpinConfig) -> bool + Send + Sync>;

/// A subset of A^N given by a pure membership predicate, optionally with an
/// explicit enumeration and a certified diameter bound.
#[derive(Clone)]
pub struct Region {
    label: String,
    membership: Predicate,
    enumeration: Option<Arc<Vec<SpinConfig>>>,
    certified_diameter: Option<Distance>,
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Region")
            .field("label", &self.label)
            .field("enumerated", &self.enumeration.as_ref().map(|e| e.len()))
            .field("certified_diameter", &self.certified_diameter)
            .finish()
    }
}

impl Region {
    pub fn from_predicate(label: impl Into<String>, f: impl Fn(&SpinConfig) -> bool + Send + Sync + 'static) -> Self {
        Self { label: label.into(), membership: Arc::new(f), enumeration: None, certified_diameter: None }
    }

    /// The whole cube A^N; its diameter is N.
    pub fn full(alphabet_size: u8, n: usize) -> Self {
        Self::from_predicate(format!("full cube {alphabet_size}^{n}"), move |x| {
            x.alphabet_size() == alphabet_size && x.dimension() == n
        })
        .with_certified_diameter(Distance::Finite(n as u64))
    }

    /// A region consisting of exactly the listed points.
    pub fn from_points(label: impl Into<String>, points: Vec<SpinConfig>) -> Self {
        let set: HashSet<SpinConfig> = points.iter().cloned().collect();
        let mut points = points;
        points.sort_by_key(|p| p.values());
        points.dedup();
        Self {
            label: label.into(),
            membership: Arc::new(move |x| set.contains(x)),
            enumeration: Some(Arc::new(points)),
            certified_diameter: None,
        }
    }

    /// Attach an explicit enumeration by scanning the binary cube {0,1}^n.
    pub fn enumerate_binary(mut self, n: usize) -> Result<Self> {
        if n > 24 {
            return invalid(format!("binary enumeration capped at N=24, got {n}"));
        }
        let pts: Vec<SpinConfig> =
            (0..1u64 << n).map(|i| SpinConfig::from_index(n, i)).filter(|x| (self.membership)(x)).collect();
        self.enumeration = Some(Arc::new(pts));
        Ok(self)
    }

    pub fn with_certified_diameter(mut self, d: Distance) -> Self {
        self.certified_diameter = Some(d);
        self
    }

    pub fn contains(&self, x: &SpinConfig) -> bool {
        (self.membership)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn enumeration(&self) -> Option<&[SpinConfig]> {
        self.enumeration.as_deref().map(|v| v.as_slice())
    }

    pub fn certified_diameter(&self) -> Option<Distance> {
        self.certified_diameter
    }
}

fn neighbours(x: &SpinConfig) -> impl Iterator<Item = SpinConfig> + '_ {
    let a = x.alphabet_size();
    (0..x.dimension()).flat_map(move |i| {
        let cur = x.get(i);
        (0..a).filter(move |&s| s != cur).map(move |s| x.with(i, s))
    })
}

fn bfs_distances(region: &Region, a: &SpinConfig, stop_at: Option<&SpinConfig>) -> (usize, Option<u64>, u64) {
    let mut seen: HashSet<SpinConfig> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(a.clone());
    queue.push_back((a.clone(), 0u64));
    let mut far = 0;
    while let Some((x, d)) = queue.pop_front() {
        far = far.max(d);
        if stop_at == Some(&x) {
            return (seen.len(), Some(d), far);
        }
        for y in neighbours(&x) {
            if !seen.contains(&y) && region.contains(&y) {
                seen.insert(y.clone());
                queue.push_back((y, d + 1));
            }
        }
    }
    (seen.len(), None, far)
}

/// Length of the shortest Hamming-step path from a to b inside Λ.
pub fn intrinsic_distance(region: &Region, a: &SpinConfig, b: &SpinConfig) -> Result<Distance> {
    check_shape(a, b)?;
    if !region.contains(a) || !region.contains(b) {
        return invalid(format!("endpoints must lie in region '{}'", region.label()));
    }
    let (_, hit, _) = bfs_distances(region, a, Some(b));
    Ok(hit.map_or(Distance::Infinite, Distance::Finite))
}

/// Maximum intrinsic distance over pairs of Λ; INFINITE when disconnected.
pub fn intrinsic_diameter(region: &Region) -> Result<Distance> {
    if let Some(points) = region.enumeration() {
        let mut best = 0;
        for p in points {
            let (reached, _, far) = bfs_distances(region, p, None);
            if reached < points.len() {
                return Ok(Distance::Infinite);
            }
            best = best.max(far);
        }
        return Ok(Distance::Finite(best));
    }
    match region.certified_diameter() {
        Some(d) => Ok(d),
        None => rejected(format!(
            "region '{}' is neither enumerable nor equipped with a certified diameter bound",
            region.label()
        )),
    }
}

type Evaluator = Arc<dyn Fn(&SpinConfig) -> f64 + Send + Sync>;

/// A real function of configurations, usually coordinate-wise increasing.
#[derive(Clone)]
pub struct IncreasingFunction {
    pub label: String,
    evaluator: Evaluator,
    pub declared_monotone: bool,
    pub lip_constants: Option<Vec<f64>>,
    pub sup_norm_bound: f64,
}

impl fmt::Debug for IncreasingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IncreasingFunction")
            .field("label", &self.label)
            .field("declared_monotone", &self.declared_monotone)
            .field("sup_norm_bound", &self.sup_norm_bound)
            .finish()
    }
}

impl IncreasingFunction {
    pub fn new(
        label: impl Into<String>,
        sup_norm_bound: f64,
        declared_monotone: bool,
        f: impl Fn(&SpinConfig) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            evaluator: Arc::new(f),
            declared_monotone,
            lip_constants: None,
            sup_norm_bound,
        }
    }

    pub fn with_lip_constants(mut self, lip: Vec<f64>) -> Self {
        self.lip_constants = Some(lip);
        self
    }

    #[inline]
    pub fn eval(&self, x: &SpinConfig) -> f64 {
        (self.evaluator)(x)
    }

    /// x ↦ x_i (binary).
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut lip = vec![0.0; n];
        lip[i] = 1.0;
        Self::new(format!("x_{i}"), 1.0, true, move |x| x.get(i) as f64).with_lip_constants(lip)
    }

    /// x ↦ m(x) (binary).
    pub fn magnetization(n: usize) -> Self {
        Self::new("m(x)", 1.0, true, |x| x.magnetization()).with_lip_constants(vec![1.0 / n as f64; n])
    }

    /// x ↦ 2·1_U(x) − 1.
    pub fn upset_sign(u: &UpSet) -> Self {
        let u = u.clone();
        Self::new(format!("2*1_U-1 [{}]", u.describe()), 1.0, true, move |x| {
            if u.contains_config(x) {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Exact monotonicity check over covering pairs of {0,…,|A|−1}^n.
    /// Returns a violating covering pair if one exists.
    pub fn check_monotone_exhaustive(&self, alphabet_size: u8, n: usize) -> Result<Option<(SpinConfig, SpinConfig)>> {
        let total = (alphabet_size as f64).powi(n as i32);
        if total > 1.0e7 {
            return invalid(format!("exhaustive monotonicity check over {total} configurations refused"));
        }
        let mut x = SpinConfig::zeros(alphabet_size, n);
        loop {
            let fx = self.eval(&x);
            for i in 0..n {
                let v = x.get(i);
                if v + 1 < alphabet_size {
                    let y = x.with(i, v + 1);
                    if self.eval(&y) < fx {
                        return Ok(Some((x, y)));
                    }
                }
            }
            if !odometer(&mut x) {
                return Ok(None);
            }
        }
    }

    /// Exact per-coordinate Lipschitz constants over the binary cube:
    /// Lip_i = max_x |F(x^{i→1}) − F(x^{i→0})|.
    pub fn exact_lipschitz(&self, n: usize) -> Result<Vec<f64>> {
        if n > 20 {
            return invalid(format!("exact Lipschitz sweep capped at N=20, got {n}"));
        }
        let mut lip = vec![0.0f64; n];
        for idx in 0..1u64 << n {
            let x = SpinConfig::from_index(n, idx);
            let fx = self.eval(&x);
            for (i, l) in lip.iter_mut().enumerate() {
                if idx >> i & 1 == 0 {
                    let fy = self.eval(&SpinConfig::from_index(n, idx | 1 << i));
                    *l = l.max((fy - fx).abs());
                }
            }
        }
        Ok(lip)
    }
}

/// Advance x to the next configuration in lexicographic (little-endian)
/// order; returns false after the last one.
pub fn odometer(x: &mut SpinConfig) -> bool {
    let a = x.alphabet_size();
    for i in 0..x.dimension() {
        let v = x.get(i);
        if v + 1 < a {
            x.set(i, v + 1);
            return true;
        }
        x.set(i, 0);
    }
    false
}

/// An upward-closed subset of {0,1}^N stored as a bitmask over the 2^N
/// configurations (configuration index = packed bits).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpSet {
    n: usize,
    mask: Vec<u64>,
}

impl UpSet {
    pub fn from_mask(n: usize, mask: Vec<u64>) -> Result<Self> {
        if n > 20 {
            return invalid("up-set masks are limited to N ≤ 20");
        }
        if mask.len() != (1usize << n).div_ceil(64) {
            return invalid("mask length does not match 2^N");
        }
        let u = Self { n, mask };
        if !u.is_upward_closed() {
            return invalid("mask is not upward closed");
        }
        Ok(u)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> &[u64] {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, index: u64) -> bool {
        (self.mask[(index >> 6) as usize] >> (index & 63)) & 1 == 1
    }

    pub fn contains_config(&self, x: &SpinConfig) -> bool {
        x.to_index().is_some_and(|i| x.dimension() == self.n && self.contains(i))
    }

    pub fn len(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks all 2^N · N covering pairs.
    pub fn is_upward_closed(&self) -> bool {
        (0..1u64 << self.n).all(|x| {
            !self.contains(x) || (0..self.n).all(|i| x >> i & 1 == 1 || self.contains(x | 1 << i))
        })
    }

    /// Minimal elements, written as bit strings.
    pub fn describe(&self) -> String {
        let mins: Vec<String> = (0..1u64 << self.n)
            .filter(|&x| self.contains(x) && (0..self.n).all(|i| x >> i & 1 == 0 || !self.contains(x & !(1 << i))))
            .map(|x| SpinConfig::from_index(self.n, x).to_string())
            .collect();
        if mins.is_empty() {
            "empty".into()
        } else {
            format!("min{{{}}}", mins.join(","))
        }
    }
}

/// All up-sets of {0,1}^N for N ≤ 5.
pub fn enumerate_upsets(n: usize) -> Result<Vec<UpSet>> {
    if n > 5 {
        return invalid(format!(
            "up-set enumeration is capped at N=5 (Dedekind numbers explode); got N={n}; use sampled increasing functions"
        ));
    }
    let size = 1usize << n;
    let mut order: Vec<u64> = (0..size as u64).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(x.count_ones()));
    let mut out = Vec::new();
    let words = size.div_ceil(64);
    let mut mask = vec![0u64; words];
    fn rec(pos: usize, order: &[u64], n: usize, mask: &mut Vec<u64>, out: &mut Vec<UpSet>) {
        if pos == order.len() {
            out.push(UpSet { n, mask: mask.clone() });
            return;
        }
        let x = order[pos];
        rec(pos + 1, order, n, mask, out);
        let covers_in = (0..n).all(|i| x >> i & 1 == 1 || (mask[((x | 1 << i) >> 6) as usize] >> ((x | 1 << i) & 63)) & 1 == 1);
        if covers_in {
            mask[(x >> 6) as usize] |= 1 << (x & 63);
            rec(pos + 1, order, n, mask, out);
            mask[(x >> 6) as usize] &= !(1 << (x & 63));
        }
    }
    rec(0, &order, n, &mut mask, &mut out);
    debug_assert!(out.iter().all(UpSet::is_upward_closed));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(v: &[u8]) -> SpinConfig {
        SpinConfig::from_values(2, v).unwrap()
    }

    #[test]
    fn meet_join_examples() {
        let x = cfg(&[1, 0, 1]);
        let y = cfg(&[0, 1, 1]);
        assert_eq!(meet(&x, &y).unwrap(), cfg(&[0, 0, 1]));
        assert_eq!(join(&x, &y).unwrap(), cfg(&[1, 1, 1]));
        assert_eq!(meet(&x, &x).unwrap(), x);
        assert_eq!(hamming(&x, &y).unwrap(), 2);
        assert_eq!(hamming(&x, &x).unwrap(), 0);
        assert_eq!(hamming(&x, &cfg(&[0, 1, 0])).unwrap(), 3);
    }

    #[test]
    fn mismatches_are_rejected() {
        let x = cfg(&[1, 0, 1]);
        assert!(meet(&x, &cfg(&[1, 0])).is_err());
        let t = SpinConfig::from_values(3, &[1, 0, 1]).unwrap();
        assert!(join(&x, &t).is_err());
        assert!(hamming(&x, &t).is_err());
        assert!(SpinConfig::from_values(3, &[3]).is_err());
    }

    #[test]
    fn index_round_trip() {
        for i in 0..32 {
            assert_eq!(SpinConfig::from_index(5, i).to_index(), Some(i));
        }
        assert_eq!(cfg(&[1, 0, 1]).to_index(), Some(5));
    }

    #[test]
    fn intrinsic_distance_examples() {
        let full = Region::full(2, 4);
        let a = cfg(&[0, 0, 0, 0]);
        let b = cfg(&[1, 1, 0, 1]);
        assert_eq!(intrinsic_distance(&full, &a, &a).unwrap(), Distance::Finite(0));
        assert_eq!(intrinsic_distance(&full, &a, &b).unwrap(), Distance::Finite(3));
        let two = Region::from_points("two", vec![cfg(&[0, 0]), cfg(&[1, 1])]);
        assert_eq!(intrinsic_distance(&two, &cfg(&[0, 0]), &cfg(&[1, 1])).unwrap(), Distance::Infinite);
        assert_eq!(intrinsic_diameter(&two).unwrap(), Distance::Infinite);
        assert!(intrinsic_distance(&two, &cfg(&[0, 1]), &cfg(&[1, 1])).is_err());
    }

    #[test]
    fn diameters() {
        let full = Region::full(2, 4).enumerate_binary(4).unwrap();
        assert_eq!(intrinsic_diameter(&full).unwrap(), Distance::Finite(4));
        assert_eq!(intrinsic_diameter(&Region::full(2, 40)).unwrap(), Distance::Finite(40));
        let bare = Region::from_predicate("anything", |_| true);
        assert!(intrinsic_diameter(&bare).is_err());
        // A path 00 - 01 - 11 avoiding 10: diameter 2.
        let path = Region::from_points("path", vec![cfg(&[0, 0]), cfg(&[1, 0]), cfg(&[1, 1])]);
        assert_eq!(intrinsic_diameter(&path).unwrap(), Distance::Finite(2));
        // A detour: ring of four points around a removed corner of {0,1,2}^2.
        let ring = Region::from_predicate("ring", |x| !(x.get(0) == 1 && x.get(1) == 1));
        let a = SpinConfig::from_values(3, &[0, 1]).unwrap();
        let b = SpinConfig::from_values(3, &[2, 1]).unwrap();
        assert_eq!(intrinsic_distance(&ring, &a, &b).unwrap(), Distance::Finite(1));
    }

    #[test]
    fn dedekind_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_upsets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 3, 6, 20, 168, 7581]);
        assert!(enumerate_upsets(6).is_err());
        for u in enumerate_upsets(4).unwrap() {
            assert!(u.is_upward_closed());
        }
    }

    #[test]
    fn monotonicity_and_lipschitz() {
        let m = IncreasingFunction::magnetization(4);
        assert_eq!(m.check_monotone_exhaustive(2, 4).unwrap(), None);
        let lip = m.exact_lipschitz(4).unwrap();
        assert!(lip.iter().all(|&l| (l - 0.25).abs() < 1e-15));
        let dec = IncreasingFunction::new("-x0", 1.0, false, |x| -(x.get(0) as f64));
        assert!(dec.check_monotone_exhaustive(2, 3).unwrap().is_some());
        let u = &enumerate_upsets(3).unwrap()[7];
        let f = IncreasingFunction::upset_sign(u);
        assert_eq!(f.check_monotone_exhaustive(2, 3).unwrap(), None);
    }
}
