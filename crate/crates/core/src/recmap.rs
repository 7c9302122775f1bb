//! Rectangle exchange transformations and their named constructors.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Multirect, Rect};
use crate::scalar::{
    add_vec, is_zero_vec, neg_vec, structural_cmp_vec, sub_vec, Scalar, SymbolTable,
};

/// One box of the domain partition together with its translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub rect: Rect,
    pub shift: Vec<Scalar>,
}

impl Piece {
    pub fn new(rect: Rect, shift: Vec<Scalar>) -> Piece {
        Piece { rect, shift }
    }

    pub fn image(&self) -> Rect {
        self.rect.translate(&self.shift)
    }
}

/// First reason a candidate map fails to be a bijective piecewise translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Dimension { piece: usize },
    DomainOverlap { first: usize, second: usize },
    DomainOutside { piece: usize },
    DomainGap,
    ImageOverlap { first: usize, second: usize },
    ImageOutside { piece: usize },
    ImageGap,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension { piece } => write!(f, "piece {piece} has the wrong dimension"),
            Violation::DomainOverlap { first, second } => {
                write!(f, "domains of pieces {first} and {second} overlap")
            }
            Violation::DomainOutside { piece } => {
                write!(f, "domain of piece {piece} leaves the ambient set")
            }
            Violation::DomainGap => write!(f, "domains do not cover the ambient set"),
            Violation::ImageOverlap { first, second } => {
                write!(f, "images of pieces {first} and {second} overlap")
            }
            Violation::ImageOutside { piece } => {
                write!(f, "image of piece {piece} leaves the ambient set")
            }
            Violation::ImageGap => write!(f, "images do not cover the ambient set"),
        }
    }
}

fn first_overlap(rects: &[Rect]) -> Result<Option<(usize, usize)>> {
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if rects[i].intersects(&rects[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// A bijection of `ambient` that translates each piece of a finite box
/// partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecMap {
    ambient: Multirect,
    pieces: Vec<Piece>,
}

impl RecMap {
    pub fn new(ambient: Multirect, pieces: Vec<Piece>) -> Result<RecMap> {
        let f = RecMap { ambient, pieces };
        match f.check()? {
            None => Ok(f),
            Some(v) => Err(Error::InvalidMap(v.to_string())),
        }
    }

    pub(crate) fn new_unchecked(ambient: Multirect, pieces: Vec<Piece>) -> RecMap {
        RecMap { ambient, pieces }
    }

    pub fn identity(ambient: &Multirect) -> RecMap {
        let dim = ambient.dim();
        let pieces = ambient
            .pieces()
            .iter()
            .map(|r| {
                let zero = r
                    .table()
                    .map(|t| vec![Scalar::zero(t); dim])
                    .unwrap_or_default();
                Piece::new(r.clone(), zero)
            })
            .collect();
        RecMap {
            ambient: ambient.clone(),
            pieces,
        }
    }

    pub fn ambient(&self) -> &Multirect {
        &self.ambient
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn table(&self) -> Option<&Arc<SymbolTable>> {
        self.ambient.pieces().iter().find_map(|r| r.table())
    }

    /// `None` when valid, otherwise the first violation found.
    pub fn check(&self) -> Result<Option<Violation>> {
        let dim = self.dim();
        for (i, p) in self.pieces.iter().enumerate() {
            if p.rect.dim() != dim || p.shift.len() != dim {
                return Ok(Some(Violation::Dimension { piece: i }));
            }
        }
        let domains: Vec<Rect> = self.pieces.iter().map(|p| p.rect.clone()).collect();
        if let Some((first, second)) = first_overlap(&domains)? {
            return Ok(Some(Violation::DomainOverlap { first, second }));
        }
        for (i, d) in domains.iter().enumerate() {
            if !self.ambient.contains(&Multirect::single(d.clone()))? {
                return Ok(Some(Violation::DomainOutside { piece: i }));
            }
        }
        if !Multirect::from_disjoint(dim, domains).contains(&self.ambient)? {
            return Ok(Some(Violation::DomainGap));
        }
        let images: Vec<Rect> = self.pieces.iter().map(Piece::image).collect();
        if let Some((first, second)) = first_overlap(&images)? {
            return Ok(Some(Violation::ImageOverlap { first, second }));
        }
        for (i, d) in images.iter().enumerate() {
            if !self.ambient.contains(&Multirect::single(d.clone()))? {
                return Ok(Some(Violation::ImageOutside { piece: i }));
            }
        }
        if !Multirect::from_disjoint(dim, images).contains(&self.ambient)? {
            return Ok(Some(Violation::ImageGap));
        }
        Ok(None)
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.check()?.is_none())
    }

    fn check_ambient(&self, other: &RecMap) -> Result<()> {
        if self.ambient == other.ambient || self.ambient.set_eq(&other.ambient)? {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RecMap) -> Result<RecMap> {
        self.check_ambient(other)?;
        let mut pieces = Vec::new();
        for g in &other.pieces {
            let img = g.image();
            for f in &self.pieces {
                if let Some(meet) = img.intersect(&f.rect)? {
                    let shift = add_vec(&g.shift, &f.shift);
                    pieces.push(Piece::new(meet.translate(&neg_vec(&g.shift)), shift));
                }
            }
        }
        Ok(RecMap::new_unchecked(other.ambient.clone(), pieces))
    }

    /// Product of maps listed left to right: the last one acts first.
    pub fn compose_all<'a>(
        ambient: &Multirect,
        maps: impl IntoIterator<Item = &'a RecMap>,
    ) -> Result<RecMap> {
        let maps: Vec<&RecMap> = maps.into_iter().collect();
        let mut acc = RecMap::identity(ambient);
        for m in maps.iter().rev() {
            acc = m.compose(&acc)?.coalesced();
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> RecMap {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece::new(p.image(), neg_vec(&p.shift)))
            .collect();
        RecMap::new_unchecked(self.ambient.clone(), pieces)
    }

    /// Pointwise equality, independent of how the pieces are cut.
    pub fn equals(&self, other: &RecMap) -> Result<bool> {
        self.check_ambient(other)?;
        for a in &self.pieces {
            for b in &other.pieces {
                if a.shift != b.shift && a.rect.intersects(&b.rect)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|p| is_zero_vec(&p.shift))
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        for p in &self.pieces {
            if p.rect.contains_point(x)? {
                return Ok(Some(add_vec(x, &p.shift)));
            }
        }
        Ok(None)
    }

    /// Union of the domains that actually move.
    pub fn support(&self) -> Multirect {
        Multirect::from_disjoint(
            self.dim(),
            self.pieces
                .iter()
                .filter(|p| !is_zero_vec(&p.shift))
                .map(|p| p.rect.clone())
                .collect(),
        )
    }

    /// Pieces grouped by translation vector, in a deterministic order.
    pub fn displacement_classes(&self) -> Vec<(Vec<Scalar>, Multirect)> {
        let mut classes: Vec<(Vec<Scalar>, Vec<Rect>)> = Vec::new();
        for p in &self.pieces {
            match classes.iter_mut().find(|(s, _)| *s == p.shift) {
                Some((_, rects)) => rects.push(p.rect.clone()),
                None => classes.push((p.shift.clone(), vec![p.rect.clone()])),
            }
        }
        classes.sort_by(|a, b| structural_cmp_vec(&a.0, &b.0));
        classes
            .into_iter()
            .map(|(s, rects)| (s, Multirect::from_disjoint(self.dim(), rects)))
            .collect()
    }

    /// The translation on `r` if `r` sits inside a single displacement class.
    pub fn shift_on(&self, r: &Rect) -> Result<Option<Vec<Scalar>>> {
        let mut found: Option<&Vec<Scalar>> = None;
        for p in &self.pieces {
            if p.rect.intersects(r)? {
                match found {
                    None => found = Some(&p.shift),
                    Some(s) if *s == p.shift => {}
                    Some(_) => return Ok(None),
                }
            }
        }
        Ok(found.cloned())
    }

    /// Image of a box, cut along the pieces it meets.
    pub fn image_of(&self, r: &Rect) -> Result<Multirect> {
        let mut out = Vec::new();
        for p in &self.pieces {
            if let Some(meet) = p.rect.intersect(r)? {
                out.push(meet.translate(&p.shift));
            }
        }
        Ok(Multirect::from_disjoint(self.dim(), out))
    }

    pub fn image_of_set(&self, m: &Multirect) -> Result<Multirect> {
        let mut out = Vec::new();
        for r in m.pieces() {
            out.extend(self.image_of(r)?.into_pieces());
        }
        Ok(Multirect::from_disjoint(self.dim(), out))
    }

    /// Merges facet-adjacent pieces with equal translation until none remain.
    /// Best effort: the result depends on the piece order.
    pub fn coalesced(&self) -> RecMap {
        RecMap::new_unchecked(self.ambient.clone(), coalesce_pieces(self.pieces.clone()))
    }

    /// Extends by the identity to a larger ambient set.
    pub fn extend_ambient(&self, ambient: &Multirect) -> Result<RecMap> {
        if !ambient.contains(&self.ambient)? {
            return Err(Error::pre("new ambient set does not contain the old one"));
        }
        let extra = ambient.subtract(&self.ambient)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(RecMap::identity(&extra).pieces);
        Ok(RecMap::new_unchecked(ambient.clone(), pieces))
    }

    /// Coordinatewise product of one-dimensional maps of `[0, 1)`.
    pub fn iet_lift(factors: &[RecMap]) -> Result<RecMap> {
        let table = factors
            .iter()
            .find_map(|f| f.table())
            .ok_or_else(|| Error::pre("no factors"))?
            .clone();
        let unit = Multirect::unit_cube(&table, 1);
        for (i, f) in factors.iter().enumerate() {
            if f.dim() != 1 || !f.ambient.set_eq(&unit)? {
                return Err(Error::pre(format!("factor {i} is not a map of [0, 1)")));
            }
            if let Some(v) = f.check()? {
                return Err(Error::InvalidMap(format!("factor {i}: {v}")));
            }
        }
        let mut pieces = vec![Piece::new(Rect::point(), Vec::new())];
        for f in factors {
            let mut next = Vec::with_capacity(pieces.len() * f.pieces.len());
            for p in &pieces {
                for q in &f.pieces {
                    let axis = p.rect.dim();
                    let rect =
                        p.rect
                            .insert_axis(axis, q.rect.lo()[0].clone(), q.rect.hi()[0].clone());
                    let mut shift = p.shift.clone();
                    shift.push(q.shift[0].clone());
                    next.push(Piece::new(rect, shift));
                }
            }
            pieces = next;
        }
        Ok(RecMap::new_unchecked(
            Multirect::unit_cube(&table, factors.len()),
            pieces,
        ))
    }

    /// `tau_{P,Q}`: swaps two disjoint translates, identity elsewhere.
    pub fn transposition(ambient: &Multirect, p: &Rect, q: &Rect) -> Result<RecMap> {
        if !p.same_shape(q) {
            return Err(Error::pre(
                "transposed boxes are not translates of each other",
            ));
        }
        if p.intersects(q)? {
            return Err(Error::pre("transposed boxes overlap"));
        }
        let both = Multirect::from_disjoint(p.dim(), vec![p.clone(), q.clone()]);
        if !ambient.contains(&both)? {
            return Err(Error::pre("transposed boxes leave the ambient set"));
        }
        let v = sub_vec(q.lo(), p.lo());
        let mut pieces = vec![
            Piece::new(p.clone(), v.clone()),
            Piece::new(q.clone(), neg_vec(&v)),
        ];
        pieces.extend(RecMap::identity(&ambient.subtract(&both)?).pieces);
        Ok(RecMap::new_unchecked(ambient.clone(), pieces))
    }

    /// Recognizes `tau_{P,Q}` and returns `(P, Q)` with `P` the box moved by
    /// the lexicographically positive translation.
    pub fn as_transposition(&self) -> Result<Option<(Rect, Rect)>> {
        let moving: Vec<_> = self
            .displacement_classes()
            .into_iter()
            .filter(|(s, _)| !is_zero_vec(s))
            .collect();
        if moving.len() != 2 || moving[0].0 != neg_vec(&moving[1].0) {
            return Ok(None);
        }
        let (v, a, b) = if is_lex_positive(&moving[0].0)? {
            (&moving[0].0, &moving[0].1, &moving[1].1)
        } else {
            (&moving[1].0, &moving[1].1, &moving[0].1)
        };
        let (p, q) = match (single_box(a)?, single_box(b)?) {
            (Some(p), Some(q)) => (p, q),
            _ => return Ok(None),
        };
        if p.translate(v) != q {
            return Ok(None);
        }
        Ok(Some((p, q)))
    }

    /// Recognizes a restricted shuffle.
    pub fn as_shuffle(&self) -> Result<Option<Shuffle>> {
        let moving: Vec<_> = self
            .displacement_classes()
            .into_iter()
            .filter(|(s, _)| !is_zero_vec(s))
            .collect();
        if moving.len() != 2 {
            return Ok(None);
        }
        let axis = match moving[0].0.iter().position(|s| !s.is_zero()) {
            Some(i) => i,
            None => return Ok(None),
        };
        for (s, _) in &moving {
            if s.iter()
                .enumerate()
                .any(|(i, c)| (i == axis) == c.is_zero())
            {
                return Ok(None);
            }
        }
        let (up, down) = if moving[0].0[axis].is_positive()? {
            (&moving[0], &moving[1])
        } else {
            (&moving[1], &moving[0])
        };
        if !up.0[axis].is_positive()? || down.0[axis].is_positive()? {
            return Ok(None);
        }
        let (lower, upper) = match (single_box(&up.1)?, single_box(&down.1)?) {
            (Some(l), Some(u)) => (l, u),
            _ => return Ok(None),
        };
        let base = lower.project_out(axis);
        if base != upper.project_out(axis) || lower.hi()[axis] != upper.lo()[axis] {
            return Ok(None);
        }
        let offset = up.0[axis].clone();
        let length = &upper.hi()[axis] - &lower.lo()[axis];
        if upper.side(axis) != offset || lower.side(axis) != -&down.0[axis] {
            return Ok(None);
        }
        let s = Shuffle {
            axis,
            base,
            start: lower.lo()[axis].clone(),
            length,
            offset,
        };
        if !self.equals(&s.to_recmap(&self.ambient)?)? {
            return Ok(None);
        }
        Ok(Some(s))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ambient": self.ambient.to_json(),
            "pieces": self.pieces.iter().map(|p| serde_json::json!({
                "rect": p.rect.to_json(),
                "shift": p.shift.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Reads the `ambient`/`pieces` fields of a document body and validates.
    pub fn from_json(
        table: &Arc<SymbolTable>,
        dim: usize,
        value: &serde_json::Value,
    ) -> Result<RecMap> {
        let ambient = Multirect::from_json(
            table,
            dim,
            value
                .get("ambient")
                .ok_or_else(|| Error::parse("ambient", "missing"))?,
            "ambient",
        )?;
        let list = value
            .get("pieces")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::parse("pieces", "missing piece list"))?;
        let mut pieces = Vec::with_capacity(list.len());
        for (i, p) in list.iter().enumerate() {
            let loc = format!("pieces[{i}]");
            let rect = Rect::from_json(
                table,
                p.get("rect").unwrap_or(&serde_json::Value::Null),
                &format!("{loc}.rect"),
            )?;
            let shift = parse_vector(table, p.get("shift"), &format!("{loc}.shift"))?;
            if rect.dim() != dim || shift.len() != dim {
                return Err(Error::parse(loc, format!("expected dimension {dim}")));
            }
            pieces.push(Piece::new(rect, shift));
        }
        let f = RecMap::new_unchecked(ambient, pieces);
        if let Some(v) = f.check()? {
            return Err(Error::parse("pieces", v.to_string()));
        }
        Ok(f)
    }
}

pub(crate) fn parse_vector(
    table: &Arc<SymbolTable>,
    value: Option<&serde_json::Value>,
    location: &str,
) -> Result<Vec<Scalar>> {
    value
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::parse(location, "expected a list of scalars"))?
        .iter()
        .enumerate()
        .map(|(i, s)| Scalar::from_json(table, s, &format!("{location}[{i}]")))
        .collect()
}

pub(crate) fn coalesce_pieces(mut pieces: Vec<Piece>) -> Vec<Piece> {
    let mut changed = true;
    while changed {
        changed = false;
        let mut i = 0;
        while i < pieces.len() {
            let mut j = i + 1;
            while j < pieces.len() {
                if pieces[i].shift == pieces[j].shift {
                    if let Some(r) = glue(&pieces[i].rect, &pieces[j].rect) {
                        pieces[i].rect = r;
                        pieces.remove(j);
                        changed = true;
                        j = i + 1;
                        continue;
                    }
                }
                j += 1;
            }
            i += 1;
        }
    }
    pieces
}

/// Boxes sharing a full facet, merged into one.
fn glue(a: &Rect, b: &Rect) -> Option<Rect> {
    let mut axis = None;
    for i in 0..a.dim() {
        if a.lo()[i] == b.lo()[i] && a.hi()[i] == b.hi()[i] {
            continue;
        }
        if axis.is_some() {
            return None;
        }
        axis = Some(i);
    }
    let i = axis?;
    if a.hi()[i] == b.lo()[i] {
        Some(a.with_axis(i, a.lo()[i].clone(), b.hi()[i].clone()))
    } else if b.hi()[i] == a.lo()[i] {
        Some(a.with_axis(i, b.lo()[i].clone(), a.hi()[i].clone()))
    } else {
        None
    }
}

/// The union as one box, if it is one.
pub(crate) fn single_box(m: &Multirect) -> Result<Option<Rect>> {
    let bbox = match m.bbox()? {
        None => return Ok(None),
        Some(b) => b,
    };
    if m.contains(&Multirect::single(bbox.clone()))? {
        Ok(Some(bbox))
    } else {
        Ok(None)
    }
}

/// First nonzero coordinate is positive.
pub fn is_lex_positive(v: &[Scalar]) -> Result<bool> {
    match v.iter().find(|s| !s.is_zero()) {
        None => Ok(false),
        Some(s) => s.is_positive(),
    }
}

/// A restricted shuffle: over `base`, the rotation "+offset modulo length"
/// of `[start, start + length)` along `axis`; identity elsewhere.
///
/// `base` lists the other axes in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub axis: usize,
    pub base: Rect,
    pub start: Scalar,
    pub length: Scalar,
    pub offset: Scalar,
}

impl Shuffle {
    pub fn new(
        axis: usize,
        base: Rect,
        start: Scalar,
        length: Scalar,
        offset: Scalar,
    ) -> Result<Shuffle> {
        if !offset.is_positive()? || !offset.lt(&length)? {
            return Err(Error::pre(format!(
                "offset {offset} must lie strictly between 0 and {length}"
            )));
        }
        if axis > base.dim() {
            return Err(Error::pre(format!("axis {axis} out of range")));
        }
        Ok(Shuffle {
            axis,
            base,
            start,
            length,
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim() + 1
    }

    pub fn end(&self) -> Scalar {
        &self.start + &self.length
    }

    /// The box the shuffle rotates.
    pub fn region(&self) -> Rect {
        self.base
            .insert_axis(self.axis, self.start.clone(), self.end())
    }

    pub fn inverse(&self) -> Shuffle {
        Shuffle {
            axis: self.axis,
            base: self.base.clone(),
            start: self.start.clone(),
            length: self.length.clone(),
            offset: &self.length - &self.offset,
        }
    }

    /// Appends `[lo, hi)` on a new last axis to the base.
    pub fn lift(&self, lo: Scalar, hi: Scalar) -> Shuffle {
        let axis = self.base.dim();
        Shuffle {
            axis: self.axis,
            base: self.base.insert_axis(axis, lo, hi),
            start: self.start.clone(),
            length: self.length.clone(),
            offset: self.offset.clone(),
        }
    }

    pub fn to_recmap(&self, ambient: &Multirect) -> Result<RecMap> {
        let region = self.region();
        if region.dim() != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                found: region.dim(),
            });
        }
        if !ambient.contains(&Multirect::single(region.clone()))? {
            return Err(Error::pre("shuffle region leaves the ambient set"));
        }
        let d = region.dim();
        let table = self.start.table();
        let cut = &self.end() - &self.offset;
        let mut up = vec![Scalar::zero(table); d];
        up[self.axis] = self.offset.clone();
        let mut down = vec![Scalar::zero(table); d];
        down[self.axis] = &cut - &self.start;
        down[self.axis] = -&down[self.axis];
        let mut pieces = vec![
            Piece::new(
                region.with_axis(self.axis, self.start.clone(), cut.clone()),
                up,
            ),
            Piece::new(region.with_axis(self.axis, cut, self.end()), down),
        ];
        pieces.extend(RecMap::identity(&ambient.subtract_rect(&region)?).pieces);
        Ok(RecMap::new_unchecked(ambient.clone(), pieces))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "shuffle",
            "axis": self.axis + 1,
            "base": self.base.to_json(),
            "interval": [self.start.to_json(), self.end().to_json()],
            "offset": self.offset.to_json(),
        })
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<Shuffle> {
        if value.get("kind").and_then(|k| k.as_str()) != Some("shuffle") {
            return Err(Error::parse(location, "factor kind must be \"shuffle\""));
        }
        let axis = value
            .get("axis")
            .and_then(|a| a.as_u64())
            .filter(|&a| a >= 1)
            .ok_or_else(|| Error::parse(location, "axis must be a positive integer"))?
            as usize
            - 1;
        let base = value
            .get("base")
            .ok_or_else(|| Error::parse(location, "missing base"))?;
        let base = Rect::from_json(table, base, &format!("{location}.base"))?;
        let interval = parse_vector(
            table,
            value.get("interval"),
            &format!("{location}.interval"),
        )?;
        if interval.len() != 2 {
            return Err(Error::parse(location, "interval needs two endpoints"));
        }
        let offset = Scalar::from_json(
            table,
            value.get("offset").unwrap_or(&serde_json::Value::Null),
            &format!("{location}.offset"),
        )?;
        let length = &interval[1] - &interval[0];
        Shuffle::new(axis, base, interval[0].clone(), length, offset)
            .map_err(|e| Error::parse(location, e.to_string()))
    }
}

/// A transposition `tau_{P,Q}` given by its two boxes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transposition {
    pub p: Rect,
    pub q: Rect,
}

impl Transposition {
    pub fn to_recmap(&self, ambient: &Multirect) -> Result<RecMap> {
        RecMap::transposition(ambient, &self.p, &self.q)
    }

    pub fn support(&self) -> Multirect {
        Multirect::from_disjoint(self.p.dim(), vec![self.p.clone(), self.q.clone()])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"kind": "transposition", "p": self.p.to_json(), "q": self.q.to_json()})
    }

    pub fn from_json(
        table: &Arc<SymbolTable>,
        value: &serde_json::Value,
        location: &str,
    ) -> Result<Transposition> {
        if value.get("kind").and_then(|k| k.as_str()) != Some("transposition") {
            return Err(Error::parse(
                location,
                "factor kind must be \"transposition\"",
            ));
        }
        let p = Rect::from_json(
            table,
            value.get("p").unwrap_or(&serde_json::Value::Null),
            &format!("{location}.p"),
        )?;
        let q = Rect::from_json(
            table,
            value.get("q").unwrap_or(&serde_json::Value::Null),
            &format!("{location}.q"),
        )?;
        if !p.same_shape(&q) {
            return Err(Error::parse(location, "boxes are not translates"));
        }
        Ok(Transposition { p, q })
    }
}

/// The restricted rotation "+b modulo a" of `[0, a)`, identity on `[a, 1)`.
pub fn restricted_rotation(table: &Arc<SymbolTable>, a: &Scalar, b: &Scalar) -> Result<RecMap> {
    Shuffle::new(0, Rect::point(), Scalar::zero(table), a.clone(), b.clone())?
        .to_recmap(&Multirect::unit_cube(table, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn t() -> Arc<SymbolTable> {
        SymbolTable::quadratic(&[2, 3]).unwrap()
    }

    fn s(t: &Arc<SymbolTable>, n: i64, d: i64) -> Scalar {
        Scalar::ratio(t, n, d)
    }

    fn r2(t: &Arc<SymbolTable>) -> Scalar {
        Scalar::symbol(t, "sqrt2", q(1, 2)).unwrap()
    }

    #[test]
    fn identity_validates_and_composes() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let id = RecMap::identity(&cube);
        assert!(id.is_valid().unwrap());
        assert!(id.inverse().equals(&id).unwrap());
        let rot = restricted_rotation(&t, &r2(&t), &s(&t, 1, 3)).unwrap();
        let id1 = RecMap::identity(rot.ambient());
        assert!(rot.compose(&id1).unwrap().equals(&rot).unwrap());
        assert!(rot.compose(&rot.inverse()).unwrap().equals(&id1).unwrap());
    }

    #[test]
    fn rotations_add_offsets() {
        let t = t();
        let a = r2(&t);
        let f = restricted_rotation(&t, &a, &s(&t, 1, 5)).unwrap();
        let g = restricted_rotation(&t, &a, &s(&t, 1, 4)).unwrap();
        let h = restricted_rotation(&t, &a, &s(&t, 9, 20)).unwrap();
        let fg = f.compose(&g).unwrap();
        assert!(fg.is_valid().unwrap());
        assert!(fg.equals(&h).unwrap());
    }

    #[test]
    fn overlapping_images_are_reported() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 1);
        let left = Rect::new(vec![s(&t, 0, 1)], vec![s(&t, 1, 2)]).unwrap();
        let right = Rect::new(vec![s(&t, 1, 2)], vec![s(&t, 1, 1)]).unwrap();
        let f = RecMap::new_unchecked(
            cube,
            vec![
                Piece::new(left, vec![s(&t, 1, 2)]),
                Piece::new(right, vec![s(&t, 0, 1)]),
            ],
        );
        assert_eq!(
            f.check().unwrap(),
            Some(Violation::ImageOverlap {
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn presentation_does_not_matter() {
        let t = t();
        let f = restricted_rotation(&t, &r2(&t), &s(&t, 1, 3)).unwrap();
        let mut pieces = Vec::new();
        for p in f.pieces() {
            let mid = &(&p.rect.lo()[0] + &p.rect.hi()[0]).scale(&q(1, 2));
            let (a, b) = p.rect.split(0, mid).unwrap();
            pieces.push(Piece::new(a.unwrap(), p.shift.clone()));
            pieces.push(Piece::new(b.unwrap(), p.shift.clone()));
        }
        let g = RecMap::new(f.ambient().clone(), pieces).unwrap();
        assert!(f.equals(&g).unwrap());
        assert_eq!(g.coalesced().pieces().len(), f.pieces().len());
    }

    #[test]
    fn transposition_is_an_involution() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let p = Rect::new(
            vec![s(&t, 0, 1), s(&t, 0, 1)],
            vec![s(&t, 1, 4), s(&t, 1, 3)],
        )
        .unwrap();
        let qq = p.translate(&[s(&t, 1, 2), s(&t, 1, 2)]);
        let tau = RecMap::transposition(&cube, &p, &qq).unwrap();
        assert!(tau.is_valid().unwrap());
        assert!(tau
            .compose(&tau)
            .unwrap()
            .equals(&RecMap::identity(&cube))
            .unwrap());
        assert!(tau.inverse().equals(&tau).unwrap());
        assert!(!tau.equals(&RecMap::identity(&cube)).unwrap());
        assert_eq!(
            tau.as_transposition().unwrap(),
            Some((p.clone(), qq.clone()))
        );
        assert!(tau
            .support()
            .set_eq(&Multirect::new(2, vec![p.clone(), qq]).unwrap())
            .unwrap());
        let wide = Rect::new(
            vec![s(&t, 1, 2), s(&t, 1, 2)],
            vec![s(&t, 1, 1), s(&t, 5, 6)],
        )
        .unwrap();
        assert!(RecMap::transposition(&cube, &p, &wide).is_err());
    }

    #[test]
    fn shuffle_round_trip() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 2);
        let base = Rect::new(vec![s(&t, 1, 5)], vec![r2(&t)]).unwrap();
        let sh = Shuffle::new(1, base, s(&t, 1, 10), s(&t, 3, 5), s(&t, 1, 7)).unwrap();
        let f = sh.to_recmap(&cube).unwrap();
        assert!(f.is_valid().unwrap());
        assert_eq!(f.as_shuffle().unwrap(), Some(sh.clone()));
        let back = f.compose(&sh.inverse().to_recmap(&cube).unwrap()).unwrap();
        assert!(back.equals(&RecMap::identity(&cube)).unwrap());
        assert!(RecMap::identity(&cube).as_shuffle().unwrap().is_none());
        assert!(Shuffle::new(0, Rect::point(), s(&t, 0, 1), s(&t, 1, 2), s(&t, 1, 2)).is_err());
    }

    #[test]
    fn disjoint_shuffles_are_not_one_shuffle() {
        let t = t();
        let cube = Multirect::unit_cube(&t, 1);
        let a = Shuffle::new(0, Rect::point(), s(&t, 0, 1), s(&t, 1, 3), s(&t, 1, 9)).unwrap();
        let b = Shuffle::new(0, Rect::point(), s(&t, 1, 2), s(&t, 1, 3), s(&t, 1, 9)).unwrap();
        let fa = a.to_recmap(&cube).unwrap();
        let fb = b.to_recmap(&cube).unwrap();
        let ab = fa.compose(&fb).unwrap();
        assert!(ab.as_shuffle().unwrap().is_none());
        assert!(ab.equals(&fb.compose(&fa).unwrap()).unwrap());
    }

    #[test]
    fn iet_lift_of_one_rotation_is_a_full_shuffle() {
        let t = t();
        let rot = restricted_rotation(&t, &r2(&t), &s(&t, 1, 3)).unwrap();
        let id = RecMap::identity(rot.ambient());
        let lift = RecMap::iet_lift(&[rot, id.clone()]).unwrap();
        assert!(lift.is_valid().unwrap());
        let base = Rect::new(vec![s(&t, 0, 1)], vec![s(&t, 1, 1)]).unwrap();
        let sh = Shuffle::new(0, base, s(&t, 0, 1), r2(&t), s(&t, 1, 3)).unwrap();
        assert!(lift
            .equals(&sh.to_recmap(&Multirect::unit_cube(&t, 2)).unwrap())
            .unwrap());
        let both_id = RecMap::iet_lift(&[id.clone(), id]).unwrap();
        assert!(both_id.is_identity());
    }

    #[test]
    fn support_matches_inverse_support() {
        let t = t();
        let f = restricted_rotation(&t, &r2(&t), &s(&t, 1, 3)).unwrap();
        assert!(f.support().set_eq(&f.inverse().support()).unwrap());
        assert!(RecMap::identity(f.ambient()).support().is_empty());
    }
}
