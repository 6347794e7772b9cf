//! Truncated balleans: finite point sets with a ball operator, in the two
//! flavors the constructions need — integer metric spaces (the natural line,
//! or an explicit distance table) and group spaces where a radius is a
//! finite element set acting by `B(g, F) = Fg ∪ {g}`.
//!
//! Everything here is computed on a finite truncation of an infinite object.
//! A ball is *boundary-reliable* when the truncation cannot have clipped it;
//! decisions that quantify over all points skip unreliable points and report
//! how many were skipped, so a cut edge never silently produces a false
//! verdict about the infinite object.

pub mod modulus;
pub mod oracle;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoarseError, Result};
use crate::locfin::F2Element;

/// A point of a finite space: a natural, an integer vector, or an element of
/// the ambient locally finite group.
///
/// Serialized as a bare number, an array, or `{"support": [...]}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Nat(u64),
    Vector(Vec<i64>),
    Group(F2Element),
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Point::Nat(v) => s.serialize_u64(*v),
            Point::Vector(v) => v.serialize(s),
            Point::Group(g) => {
                use serde::ser::SerializeStruct;
                let mut st = s.serialize_struct("Point", 1)?;
                st.serialize_field("support", g.support())?;
                st.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Nat(u64),
            Vector(Vec<i64>),
            Group { support: Vec<u64> },
        }
        match Raw::deserialize(d)? {
            Raw::Nat(v) => Ok(Point::Nat(v)),
            Raw::Vector(v) => Ok(Point::Vector(v)),
            Raw::Group { support } => F2Element::from_support(support)
                .map(Point::Group)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl Point {
    pub fn nat(&self) -> Option<u64> {
        match self {
            Point::Nat(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Nat(v) => write!(f, "{v}"),
            Point::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Point::Group(g) => write!(f, "{g}"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A radius: a nonnegative integer for metric spaces, or (for group spaces)
/// either an index into the space's named radius chain or an explicit
/// element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Int(u64),
    Named(usize),
    Set(Vec<F2Element>),
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Int(r) => write!(f, "{r}"),
            Radius::Named(i) => write!(f, "F_{i}"),
            Radius::Set(els) => write!(f, "{{set of {}}}", els.len()),
        }
    }
}

/// How the stored points sit inside their infinite host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HostBound {
    /// The instance is its own universe; nothing was cut.
    SelfContained,
    /// Points were cut from the naturals at this inclusive upper bound.
    NatUpTo(u64),
    /// Points were cut from the ambient group at this exclusive coordinate
    /// bound.
    CoordBound(u64),
}

enum Geometry {
    /// Natural points with `d(x, y) = |x - y|`.
    Line,
    /// Explicit distance table, indexed by point position.
    Table(Vec<Vec<u64>>),
    /// Group ballean with a nested chain of named radius sets.
    Group { chain: Vec<BTreeSet<F2Element>> },
}

/// A finite truncated ballean.
pub struct FiniteSpace {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    geometry: Geometry,
    host: HostBound,
}

impl FiniteSpace {
    fn build(mut points: Vec<Point>, geometry: Geometry, host: HostBound) -> Result<Self> {
        points.sort();
        points.dedup();
        if points.is_empty() {
            return Err(CoarseError::ParameterViolation(
                "a space needs at least one point".into(),
            ));
        }
        let index = points
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(FiniteSpace {
            points,
            index,
            geometry,
            host,
        })
    }

    /// The interval `[0, max]` of the natural line as its own universe.
    pub fn nat_interval(max: u64) -> Result<Self> {
        Self::nat_points((0..=max).collect())
    }

    /// An arbitrary finite set of naturals as its own universe.
    pub fn nat_points(points: Vec<u64>) -> Result<Self> {
        Self::build(
            points.into_iter().map(Point::Nat).collect(),
            Geometry::Line,
            HostBound::SelfContained,
        )
    }

    /// A finite set of naturals cut from an infinite subset of the naturals
    /// at `host_max`; balls near the cut are flagged unreliable.
    pub fn nat_points_truncated(points: Vec<u64>, host_max: u64) -> Result<Self> {
        if let Some(&beyond) = points.iter().find(|&&p| p > host_max) {
            return Err(CoarseError::ParameterViolation(format!(
                "point {beyond} lies beyond the declared truncation bound {host_max}"
            )));
        }
        Self::build(
            points.into_iter().map(Point::Nat).collect(),
            Geometry::Line,
            HostBound::NatUpTo(host_max),
        )
    }

    /// A space given by an explicit symmetric distance table with zero
    /// diagonal. Points are labeled by the caller.
    #[allow(clippy::needless_range_loop)] // checks compare (i,j) with (j,i)
    pub fn from_distance_table(points: Vec<Point>, table: Vec<Vec<u64>>) -> Result<Self> {
        let n = points.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(CoarseError::ParameterViolation(
                "distance table shape does not match the point count".into(),
            ));
        }
        for i in 0..n {
            if table[i][i] != 0 {
                return Err(CoarseError::ParameterViolation(format!(
                    "distance table has nonzero diagonal at {i}"
                )));
            }
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return Err(CoarseError::ParameterViolation(format!(
                        "distance table is not symmetric at ({i},{j})"
                    )));
                }
                if i != j && table[i][j] == 0 {
                    return Err(CoarseError::ParameterViolation(format!(
                        "distinct points {i},{j} at distance zero"
                    )));
                }
            }
        }
        Self::from_distance_table_unchecked(points, table)
    }

    /// Same as [`Self::from_distance_table`] but without the metric checks.
    /// Exists so a corrupted ball rule can be fed to the axiom checker.
    pub fn from_distance_table_unchecked(points: Vec<Point>, table: Vec<Vec<u64>>) -> Result<Self> {
        // keep the caller's point order aligned with the table
        if points.len() != table.len() {
            return Err(CoarseError::ParameterViolation(
                "distance table shape does not match the point count".into(),
            ));
        }
        let mut indexed: Vec<(Point, usize)> =
            points.iter().cloned().zip(0..points.len()).collect();
        indexed.sort_by(|a, b| a.0.cmp(&b.0));
        if indexed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(CoarseError::ParameterViolation(
                "distance table points must be distinct".into(),
            ));
        }
        let order: Vec<usize> = indexed.iter().map(|(_, i)| *i).collect();
        let sorted_points: Vec<Point> = indexed.into_iter().map(|(p, _)| p).collect();
        let mut sorted_table = vec![vec![0u64; order.len()]; order.len()];
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                sorted_table[i][j] = table[oi][oj];
            }
        }
        Self::build(
            sorted_points,
            Geometry::Table(sorted_table),
            HostBound::SelfContained,
        )
    }

    /// A group-ballean truncation: explicit points, a nested chain of named
    /// radius sets, and the coordinate bound the points were cut at.
    pub fn group_space(
        points: Vec<F2Element>,
        chain: Vec<Vec<F2Element>>,
        coord_bound: Option<u64>,
    ) -> Result<Self> {
        let mut sets: Vec<BTreeSet<F2Element>> = Vec::with_capacity(chain.len());
        for (i, raw) in chain.into_iter().enumerate() {
            let set: BTreeSet<F2Element> = raw.into_iter().collect();
            if let Some(prev) = sets.last() {
                if !prev.is_subset(&set) {
                    return Err(CoarseError::ParameterViolation(format!(
                        "radius chain is not nested at index {i}"
                    )));
                }
            }
            sets.push(set);
        }
        if sets.is_empty() {
            return Err(CoarseError::ParameterViolation(
                "group space needs at least one named radius set".into(),
            ));
        }
        let host = match coord_bound {
            Some(b) => HostBound::CoordBound(b),
            None => HostBound::SelfContained,
        };
        Self::build(
            points.into_iter().map(Point::Group).collect(),
            Geometry::Group { chain: sets },
            host,
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn host(&self) -> &HostBound {
        &self.host
    }

    /// Number of named radius sets (group spaces), if any.
    pub fn named_radius_count(&self) -> usize {
        match &self.geometry {
            Geometry::Group { chain } => chain.len(),
            _ => 0,
        }
    }

    pub fn is_metric(&self) -> bool {
        !matches!(self.geometry, Geometry::Group { .. })
    }

    /// The same geometry restricted to a subset of the points.
    pub fn subspace(&self, subset: &BTreeSet<Point>) -> Result<FiniteSpace> {
        for p in subset {
            if !self.contains(p) {
                return Err(CoarseError::NotASubset(p.to_string()));
            }
        }
        let points: Vec<Point> = subset.iter().cloned().collect();
        let geometry = match &self.geometry {
            Geometry::Line => Geometry::Line,
            Geometry::Table(full) => {
                let ids: Vec<usize> = points.iter().map(|p| self.index[p]).collect();
                let mut sub = vec![vec![0u64; ids.len()]; ids.len()];
                for (i, &oi) in ids.iter().enumerate() {
                    for (j, &oj) in ids.iter().enumerate() {
                        sub[i][j] = full[oi][oj];
                    }
                }
                Geometry::Table(sub)
            }
            Geometry::Group { chain } => Geometry::Group {
                chain: chain.clone(),
            },
        };
        Self::build(points, geometry, self.host.clone())
    }

    fn radius_for_geometry(&self, r: &Radius) -> Result<()> {
        match (&self.geometry, r) {
            (Geometry::Line, Radius::Int(_)) | (Geometry::Table(_), Radius::Int(_)) => Ok(()),
            (Geometry::Group { chain }, Radius::Named(i)) => {
                if *i < chain.len() {
                    Ok(())
                } else {
                    Err(CoarseError::InvalidRadius(format!(
                        "named radius {i} beyond chain length {}",
                        chain.len()
                    )))
                }
            }
            (Geometry::Group { .. }, Radius::Set(els)) => {
                if let HostBound::CoordBound(bound) = self.host {
                    for e in els {
                        if e.max_coord().is_some_and(|c| c >= bound) {
                            return Err(CoarseError::InvalidRadius(format!(
                                "radius element {e} reaches outside the ambient truncation"
                            )));
                        }
                    }
                }
                Ok(())
            }
            _ => Err(CoarseError::InvalidRadius(format!(
                "radius {r} does not fit this space"
            ))),
        }
    }

    /// `B(x, r)`: the set of stored points within the radius. Always
    /// contains `x` itself.
    pub fn ball(&self, x: &Point, r: &Radius) -> Result<BTreeSet<Point>> {
        self.radius_for_geometry(r)?;
        let xi = self
            .index_of(x)
            .ok_or_else(|| CoarseError::UnknownPoint(x.to_string()))?;
        match (&self.geometry, r) {
            (Geometry::Line, Radius::Int(rv)) => {
                let center = x.nat().expect("line points are naturals");
                let lo = Point::Nat(center.saturating_sub(*rv));
                let hi = Point::Nat(center.saturating_add(*rv));
                let start = self.points.partition_point(|p| *p < lo);
                let end = self.points.partition_point(|p| *p <= hi);
                Ok(self.points[start..end].iter().cloned().collect())
            }
            // no forced center here: a corrupted table must be allowed to
            // violate reflexivity so the axiom checker can catch it
            (Geometry::Table(table), Radius::Int(rv)) => Ok(self
                .points
                .iter()
                .enumerate()
                .filter(|(j, _)| table[xi][*j] <= *rv)
                .map(|(_, p)| p.clone())
                .collect()),
            (Geometry::Group { chain }, Radius::Named(i)) => {
                Ok(self.group_ball(x, chain[*i].iter()))
            }
            (Geometry::Group { .. }, Radius::Set(els)) => Ok(self.group_ball(x, els.iter())),
            _ => unreachable!("validated by radius_for_geometry"),
        }
    }

    fn group_ball<'a>(
        &self,
        x: &Point,
        radius: impl Iterator<Item = &'a F2Element>,
    ) -> BTreeSet<Point> {
        let g = match x {
            Point::Group(g) => g,
            _ => unreachable!("group spaces hold group points"),
        };
        let mut out: BTreeSet<Point> = BTreeSet::new();
        out.insert(x.clone());
        for f in radius {
            let candidate = Point::Group(f.add(g));
            if self.contains(&candidate) {
                out.insert(candidate);
            }
        }
        out
    }

    /// `B*(x, r) = {y : x ∈ B(y, r)}`, computed from the definition over the
    /// stored points.
    pub fn star_ball(&self, x: &Point, r: &Radius) -> Result<BTreeSet<Point>> {
        self.radius_for_geometry(r)?;
        if !self.contains(x) {
            return Err(CoarseError::UnknownPoint(x.to_string()));
        }
        let mut out = BTreeSet::new();
        for y in &self.points {
            if self.ball(y, r)?.contains(x) {
                out.insert(y.clone());
            }
        }
        Ok(out)
    }

    /// `B(A, r)`: union of balls around a subset.
    pub fn set_ball(&self, a: &BTreeSet<Point>, r: &Radius) -> Result<BTreeSet<Point>> {
        for p in a {
            if !self.contains(p) {
                return Err(CoarseError::NotASubset(p.to_string()));
            }
        }
        let mut out = BTreeSet::new();
        for p in a {
            out.extend(self.ball(p, r)?);
        }
        Ok(out)
    }

    /// Distance between two stored points: the integer metric value, or the
    /// least named radius index that relates them (`None` when no stored
    /// radius does).
    pub fn pair_distance(&self, x: &Point, y: &Point) -> Result<Option<u64>> {
        let xi = self
            .index_of(x)
            .ok_or_else(|| CoarseError::UnknownPoint(x.to_string()))?;
        let yi = self
            .index_of(y)
            .ok_or_else(|| CoarseError::UnknownPoint(y.to_string()))?;
        match &self.geometry {
            Geometry::Line => {
                let a = x.nat().unwrap();
                let b = y.nat().unwrap();
                Ok(Some(a.abs_diff(b)))
            }
            Geometry::Table(table) => Ok(Some(table[xi][yi])),
            Geometry::Group { chain } => {
                if x == y {
                    return Ok(Some(0));
                }
                let (gx, gy) = match (x, y) {
                    (Point::Group(a), Point::Group(b)) => (a, b),
                    _ => unreachable!(),
                };
                let diff = gx.add(gy);
                for (i, set) in chain.iter().enumerate() {
                    if set.contains(&diff) {
                        return Ok(Some(i as u64));
                    }
                }
                Ok(None)
            }
        }
    }

    /// Largest meaningful integer radius / named index for witness searches.
    pub fn radius_ceiling(&self) -> u64 {
        match &self.geometry {
            Geometry::Line => {
                let lo = self.points.first().and_then(Point::nat).unwrap_or(0);
                let hi = self.points.last().and_then(Point::nat).unwrap_or(0);
                hi - lo
            }
            Geometry::Table(table) => table
                .iter()
                .flat_map(|row| row.iter().copied())
                .max()
                .unwrap_or(0),
            Geometry::Group { chain } => chain.len().saturating_sub(1) as u64,
        }
    }

    /// Whether the truncation cannot have clipped `B(x, r)`.
    pub fn is_reliable(&self, x: &Point, r: &Radius) -> bool {
        match (&self.host, r) {
            (HostBound::SelfContained, _) => true,
            (HostBound::NatUpTo(n), Radius::Int(rv)) => x
                .nat()
                .is_some_and(|v| v.checked_add(*rv).is_some_and(|s| s <= *n)),
            (HostBound::CoordBound(bound), Radius::Named(_)) => {
                // named chain sets live inside the truncation by construction
                let _ = bound;
                true
            }
            (HostBound::CoordBound(bound), Radius::Set(els)) => {
                els.iter().all(|e| e.max_coord().is_none_or(|c| c < *bound))
            }
            _ => true,
        }
    }

    fn reliable_points(&self, r: &Radius) -> (Vec<&Point>, usize) {
        let mut reliable = Vec::with_capacity(self.points.len());
        let mut excluded = 0usize;
        for p in &self.points {
            if self.is_reliable(p, r) {
                reliable.push(p);
            } else {
                excluded += 1;
            }
        }
        (reliable, excluded)
    }

    /// Whether `B(Y, r)` covers every boundary-reliable point.
    pub fn is_large_at(&self, y: &BTreeSet<Point>, r: &Radius) -> Result<LargenessReport> {
        let covered = self.set_ball(y, r)?;
        let (reliable, excluded) = self.reliable_points(r);
        let mut uncovered = None;
        for p in reliable {
            if !covered.contains(p) {
                uncovered = Some(p.clone());
                break;
            }
        }
        Ok(LargenessReport {
            is_large: uncovered.is_none(),
            radius: r.to_string(),
            excluded_points: excluded,
            uncovered,
        })
    }

    /// Samples the three ballean axioms plus reflexivity of the ball rule.
    ///
    /// For each ordered pair of sampled radii it looks for the witness
    /// radius of the star inclusion and of ball composition; for each
    /// sampled point pair it looks for a radius relating them. Witnesses are
    /// only sought within the truncation (integer radii up to the diameter,
    /// or the named chain), so a missing witness at a cut edge is reported,
    /// not asserted as a failure of the infinite object.
    pub fn check_ballean_axioms(
        &self,
        radii: &[Radius],
        pairs: &[(Point, Point)],
    ) -> Result<AxiomReport> {
        if radii.is_empty() || pairs.is_empty() {
            return Err(CoarseError::ParameterViolation(
                "axiom check needs nonempty radius and pair samples".into(),
            ));
        }
        let mut report = AxiomReport {
            reflexivity_failures: Vec::new(),
            star_witnesses: Vec::new(),
            composition_witnesses: Vec::new(),
            connectivity_witnesses: Vec::new(),
            excluded_margin: 0,
            passed: true,
        };

        // reflexivity: x ∈ B(x, r) everywhere, for every sampled radius
        for r in radii {
            for x in &self.points {
                if !self.ball(x, r)?.contains(x) {
                    report.reflexivity_failures.push((x.clone(), r.to_string()));
                    report.passed = false;
                }
            }
        }

        for alpha in radii {
            // star inclusion: find α' with B(x, α) ⊆ B*(x, α') for all x
            let (reliable, excluded) = self.reliable_points(alpha);
            report.excluded_margin = report.excluded_margin.max(excluded);
            let mut needed: Option<u64> = Some(0);
            'star: for x in &reliable {
                for y in self.ball(x, alpha)? {
                    match self.pair_distance(&y, x)? {
                        Some(d) => {
                            needed = needed.map(|cur| cur.max(d));
                        }
                        None => {
                            needed = None;
                            break 'star;
                        }
                    }
                }
            }
            report.star_witnesses.push(StarWitness {
                alpha: alpha.to_string(),
                witness: needed.map(|v| self.describe_radius_value(v)),
            });
            if needed.is_none() {
                report.passed = false;
            }

            for beta in radii {
                let combined = self.combined_radius(alpha, beta);
                let (reliable2, excluded2) = match &combined {
                    Some(c) => self.reliable_points(c),
                    None => self.reliable_points(beta),
                };
                report.excluded_margin = report.excluded_margin.max(excluded2);
                let mut gamma: Option<u64> = Some(0);
                'comp: for x in &reliable2 {
                    let inner = self.ball(x, alpha)?;
                    for y in inner {
                        for z in self.ball(&y, beta)? {
                            match self.pair_distance(x, &z)? {
                                Some(d) => gamma = gamma.map(|cur| cur.max(d)),
                                None => {
                                    gamma = None;
                                    break 'comp;
                                }
                            }
                        }
                    }
                }
                let witness_set = self.composition_witness_set(alpha, beta);
                report.composition_witnesses.push(CompositionWitness {
                    alpha: alpha.to_string(),
                    beta: beta.to_string(),
                    witness: gamma.map(|v| self.describe_radius_value(v)),
                    witness_set,
                });
                if gamma.is_none() {
                    report.passed = false;
                }
            }
        }

        for (x, y) in pairs {
            let d = self.pair_distance(x, y)?;
            report.connectivity_witnesses.push(ConnectivityWitness {
                x: x.clone(),
                y: y.clone(),
                witness: d.map(|v| self.describe_radius_value(v)),
            });
            if d.is_none() {
                report.passed = false;
            }
        }

        Ok(report)
    }

    fn describe_radius_value(&self, v: u64) -> String {
        match &self.geometry {
            Geometry::Group { .. } => format!("F_{v}"),
            _ => v.to_string(),
        }
    }

    fn combined_radius(&self, alpha: &Radius, beta: &Radius) -> Option<Radius> {
        match (alpha, beta) {
            (Radius::Int(a), Radius::Int(b)) => Some(Radius::Int(a.saturating_add(*b))),
            _ => None,
        }
    }

    /// For group radii, the product-union set that witnesses composition:
    /// `B(B(x, F_a), F_b) = (F_b F_a ∪ F_a ∪ F_b) x ∪ {x}`.
    fn composition_witness_set(&self, alpha: &Radius, beta: &Radius) -> Option<Vec<F2Element>> {
        let Geometry::Group { chain } = &self.geometry else {
            return None;
        };
        let resolve = |r: &Radius| -> Option<Vec<F2Element>> {
            match r {
                Radius::Named(i) => chain.get(*i).map(|s| s.iter().cloned().collect()),
                Radius::Set(els) => Some(els.clone()),
                Radius::Int(_) => None,
            }
        };
        let fa = resolve(alpha)?;
        let fb = resolve(beta)?;
        let mut out: BTreeSet<F2Element> = BTreeSet::new();
        for a in &fa {
            for b in &fb {
                out.insert(b.add(a));
            }
            out.insert(a.clone());
        }
        out.extend(fb.iter().cloned());
        Some(out.into_iter().collect())
    }
}

/// Outcome of a largeness check on the truncation.
#[derive(Clone, Debug, Serialize)]
pub struct LargenessReport {
    pub is_large: bool,
    pub radius: String,
    pub excluded_points: usize,
    pub uncovered: Option<Point>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarWitness {
    pub alpha: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionWitness {
    pub alpha: String,
    pub beta: String,
    pub witness: Option<String>,
    /// For group spaces, the explicit product set that works as γ.
    pub witness_set: Option<Vec<F2Element>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityWitness {
    pub x: Point,
    pub y: Point,
    pub witness: Option<String>,
}

/// Report of [`FiniteSpace::check_ballean_axioms`].
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub reflexivity_failures: Vec<(Point, String)>,
    pub star_witnesses: Vec<StarWitness>,
    pub composition_witnesses: Vec<CompositionWitness>,
    pub connectivity_witnesses: Vec<ConnectivityWitness>,
    pub excluded_margin: usize,
    pub passed: bool,
}
