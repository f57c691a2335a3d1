use std::collections::BTreeSet;

use crate::cascade::{induced_failure_set, simulate_cascade};
use crate::error::{Error, Result};
use crate::model::{apply_modification, Auxiliary, EntityId, InterdependentNetwork, Modification};

/// `AP(D, x | K)`: entities that stop failing when `x` is added to rule `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectionSet {
    pub idr_label: u32,
    pub auxiliary: Auxiliary,
    pub protected: BTreeSet<EntityId>,
}

/// Simulates the attack on the original and the modified network and returns
/// the difference of their induced failures. A concrete auxiliary must not
/// fail under the attack and must lie outside the rule.
pub fn auxiliary_protection_set(
    net: &InterdependentNetwork,
    idr_label: u32,
    auxiliary: Auxiliary,
    attacked: &BTreeSet<EntityId>,
) -> Result<ProtectionSet> {
    net.idr(idr_label)?;
    let original = simulate_cascade(net, attacked)?;
    if let Auxiliary::Entity(x) = auxiliary {
        if original.fail_time(x).is_some() {
            return Err(Error::AuxiliaryFails(x));
        }
    }
    let modified = apply_modification(
        net,
        Modification {
            idr_label,
            auxiliary,
        },
    )?;
    let after = induced_failure_set(&simulate_cascade(&modified, attacked)?);
    let protected = induced_failure_set(&original)
        .difference(&after)
        .copied()
        .collect();
    Ok(ProtectionSet {
        idr_label,
        auxiliary,
        protected,
    })
}
