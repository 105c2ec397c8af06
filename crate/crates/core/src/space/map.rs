use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use super::{PointId, PointValue, Space, SpaceError};

/// Image of a point under a [`SelfMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Image {
    Point(PointId),
    /// The true image lies outside a truncated carrier.
    Outside,
}

/// A self-map stored as a lookup table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfMap {
    images: Vec<Image>,
    source: Option<String>,
    declared_continuous: Option<bool>,
}

impl SelfMap {
    pub fn new(space: &Space, images: Vec<Image>) -> Result<Self, SpaceError> {
        if images.len() != space.len() {
            return Err(SpaceError::DimensionMismatch {
                expected: space.len(),
                found: images.len(),
            });
        }
        for image in &images {
            if let Image::Point(p) = image {
                space.check_id(*p)?;
            }
        }
        Ok(SelfMap {
            images,
            source: None,
            declared_continuous: None,
        })
    }

    /// Evaluates `f` on every point value and looks the result up in the
    /// carrier. `None` or a value missing from the carrier becomes
    /// [`Image::Outside`].
    pub fn from_values<F>(space: &Space, mut f: F) -> Self
    where
        F: FnMut(&PointValue) -> Option<PointValue>,
    {
        let index: alloc::collections::BTreeMap<&PointValue, PointId> =
            space.ids().map(|id| (space.value(id), id)).collect();
        let images = space
            .ids()
            .map(|id| {
                f(space.value(id))
                    .and_then(|v| index.get(&v).copied())
                    .map_or(Image::Outside, Image::Point)
            })
            .collect();
        SelfMap {
            images,
            source: None,
            declared_continuous: None,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn with_declared_continuity(mut self, flag: Option<bool>) -> Self {
        self.declared_continuous = flag;
        self
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn declared_continuity(&self) -> Option<bool> {
        self.declared_continuous
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn image(&self, x: PointId) -> Image {
        self.images[x.0]
    }

    pub fn apply(&self, x: PointId) -> Option<PointId> {
        match self.images[x.0] {
            Image::Point(p) => Some(p),
            Image::Outside => None,
        }
    }

    /// `Tⁿ(x)`, or `None` once the orbit leaves the carrier.
    pub fn apply_n(&self, x: PointId, n: usize) -> Option<PointId> {
        (0..n).try_fold(x, |p, _| self.apply(p))
    }

    pub fn is_partial(&self) -> bool {
        self.images.contains(&Image::Outside)
    }

    pub fn is_fixed(&self, x: PointId) -> bool {
        self.apply(x) == Some(x)
    }
}
