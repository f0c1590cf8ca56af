//! Commensurable interpolants: the constructive side of Γ-equivalence.

use std::cmp::Ordering;

use super::hull::Hull;
use super::index::{InitialSegment, Slot};
use super::vector::SlotVector;
use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

impl Hull {
    /// A commensurable q with u < q < v, if one exists. Requires u < v.
    ///
    /// Any such q must agree with u and v before their first differing slot,
    /// so that common prefix has to be commensurable; the separating slot then
    /// either takes a rational strictly between the two values, or (at a
    /// marker slot) is bridged by the sign pattern of the two markers.
    pub(crate) fn interpolate(&self, u: &SlotVector, v: &SlotVector) -> Result<Option<SlotVector>> {
        let Some(slot) = self.first_difference(u, v) else {
            return Ok(None);
        };
        let (prefix, _) = self.split(u, &slot);
        if !self.is_commensurable(&prefix) {
            return Ok(None);
        }
        match slot {
            Slot::Pos(p) => {
                let z = self.value(u, &slot).rational_strictly_between(&self.value(v, &slot))?;
                Ok(Some(prefix.add(&SlotVector::unit(p, Scalar::from_rational(z)))?))
            }
            Slot::Mark(s) => {
                let x = self.value(u, &slot).signum()?;
                let y = self.value(v, &slot).signum()?;
                match (x, y) {
                    (Ordering::Less, Ordering::Greater) => Ok(Some(prefix)),
                    (Ordering::Equal, Ordering::Greater) => {
                        let (_, rest) = self.split(u, &slot);
                        Ok(self.commensurable_above(&rest, &s)?.map(|q| prefix.add(&q)).transpose()?)
                    }
                    (Ordering::Less, Ordering::Equal) => {
                        let (_, rest) = self.split(v, &slot);
                        let above = self.commensurable_above(&rest.neg(), &s)?;
                        Ok(above.map(|q| prefix.add(&q.neg())).transpose()?)
                    }
                    _ => Ok(None),
                }
            }
        }
    }

    /// A commensurable element supported on I \ S strictly above `r`, where
    /// `r` lives on slots after i_S.
    fn commensurable_above(&self, r: &SlotVector, s: &InitialSegment) -> Result<Option<SlotVector>> {
        let ix = self.index();
        let first = self.events(&[r]).into_iter().find(|t| !self.value(r, t).is_zero());
        match first {
            None => Ok(ix
                .position_between(s, &ix.whole())
                .map(|p| SlotVector::unit(p, Scalar::from_int(1)))),
            Some(Slot::Pos(p)) => {
                let z = self.value(r, &Slot::Pos(p)).integer_above()?;
                Ok(Some(SlotVector::unit(p, Scalar::from_rational(z))))
            }
            Some(Slot::Mark(u)) => Ok(ix.position_between(s, &u).map(|p| SlotVector::unit(p, Scalar::from_int(1)))),
        }
    }

    /// Independent decision of Γ-equivalence for incommensurable elements:
    /// equivalent iff no commensurable element lies strictly between them.
    pub fn equivalence_oracle(&self, u: &SlotVector, v: &SlotVector) -> Result<bool> {
        if self.is_commensurable(u) || self.is_commensurable(v) {
            return Err(Error::domain("equivalence_oracle needs incommensurable inputs"));
        }
        match self.compare(u, v)? {
            Ordering::Equal => Ok(true),
            Ordering::Less => Ok(self.interpolate(u, v)?.is_none()),
            Ordering::Greater => Ok(self.interpolate(v, u)?.is_none()),
        }
    }

    pub fn rational_between(&self, u: &SlotVector, v: &SlotVector) -> Result<Option<SlotVector>> {
        if self.compare(u, v)? != Ordering::Less {
            return Err(Error::domain("rational_between needs u < v"));
        }
        if self.is_commensurable(u) && self.is_commensurable(v) {
            let half = Rational::new(1.into(), 2.into());
            return Ok(Some(u.add(v)?.scale(&half)));
        }
        self.interpolate(u, v)
    }
}
