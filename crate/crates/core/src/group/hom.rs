use std::sync::Arc;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism between two table groups, stored as its full image map.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    image_map: Vec<usize>,
}

impl GroupHom {
    /// Extends generator images to the whole source group, then checks the
    /// homomorphism property on every pair.
    pub fn from_generators(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: &[(usize, usize)],
    ) -> Result<Self> {
        for &(s, t) in images {
            source.check_element(s)?;
            target.check_element(t)?;
        }
        let n = source.order();
        let mut image = vec![usize::MAX; n];
        image[0] = 0;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &(s, t) in images {
                let y = source.mul(x, s);
                let fy = target.mul(image[x], t);
                if image[y] == usize::MAX {
                    image[y] = fy;
                    stack.push(y);
                } else if image[y] != fy {
                    return Err(Error::InvalidHom(format!(
                        "images are inconsistent with the relations (element {y})"
                    )));
                }
            }
        }
        if image.contains(&usize::MAX) {
            return Err(Error::InvalidHom("images are not given on a generating set".into()));
        }
        Self::from_map(source, target, image)
    }

    /// Validates an explicit image array.
    pub fn from_map(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, image_map: Vec<usize>) -> Result<Self> {
        if image_map.len() != source.order() {
            return Err(Error::InvalidHom("image map has the wrong length".into()));
        }
        for &x in &image_map {
            target.check_element(x)?;
        }
        if image_map[0] != 0 {
            return Err(Error::InvalidHom("identity must map to identity".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if image_map[source.mul(a, b)] != target.mul(image_map[a], image_map[b]) {
                    return Err(Error::InvalidHom(format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(Self { source, target, image_map })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let image_map = (0..group.order()).collect();
        Self { source: group.clone(), target: group, image_map }
    }

    /// Inner automorphism `g ↦ x g x^{-1}`.
    pub fn conjugation(group: Arc<FiniteGroup>, x: usize) -> Self {
        let image_map = (0..group.order()).map(|g| group.conjugate(x, g)).collect();
        Self { source: group.clone(), target: group, image_map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn image_map(&self) -> &[usize] {
        &self.image_map
    }

    pub fn apply(&self, g: usize) -> usize {
        self.image_map[g]
    }

    pub fn image_of(&self, s: &Subgroup) -> Subgroup {
        let mut elems: Vec<usize> = s.elements().iter().map(|&g| self.image_map[g]).collect();
        elems.sort_unstable();
        elems.dedup();
        Subgroup::from_sorted(self.target.order(), elems)
    }

    pub fn image(&self) -> Subgroup {
        self.image_of(&self.source.whole())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.order()
    }
}
