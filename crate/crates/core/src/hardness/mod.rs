//! Instance generators and verifiers for the reduction chain from binary
//! CSP on binary shift graphs to induced-minor testing of a fixed tree.

mod anchored;
mod csp;
mod midp;

pub use anchored::{
    anchored_to_imt, check_attachment_claims, midp_to_anchored, verify_anchored_model, AnchoredInstance,
    AnchoredReduction, Attachment, AttachmentClaims, ImtInstance, MaterializedImt,
};
pub use csp::{
    csp_from_coloring, greedy_minor_embed, planted_csp, random_csp, solve_csp_brute, BinaryCsp, Relation, EQUAL,
    FULL, MAX_BRUTE_CSP_VARS, UNEQUAL,
};
pub use midp::{
    csp_to_midp, solve_midp_brute, verify_midp_solution, Layout, MidpInstance, MidpReduction, MIDP_LAYERS,
};

use crate::binshift::{bs_partition, ShiftPartition};
use crate::error::{invalid, Result};
use crate::graph::InducedMinorModel;

/// Largest consecutive-layer certificate width the construction guarantees.
pub const MIDP_WIDTH_BOUND: usize = 169;

/// Every stage of the chain for one CSP on `BS_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub csp: BinaryCsp,
    pub partition: ShiftPartition,
    pub midp: MidpReduction,
    pub anchored: AnchoredReduction,
    pub imt: ImtInstance,
}

/// Runs the reductions with attachment height parameter `h`.
pub fn build_chain(csp: &BinaryCsp, h: u32) -> Result<Chain> {
    let n = csp.graph.n();
    if n < 4 || !n.is_power_of_two() {
        return invalid(format!("{n} variables is not a binary shift graph size"));
    }
    let partition = bs_partition(n.trailing_zeros())?;
    let midp = csp_to_midp(csp, &partition)?;
    let anchored = midp_to_anchored(&midp.instance)?;
    let imt = anchored_to_imt(&anchored.instance, h)?;
    Ok(Chain { csp: csp.clone(), partition, midp, anchored, imt })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForwardWitness {
    pub paths: Vec<Vec<usize>>,
    pub anchored_model: InducedMinorModel,
    /// Model on the base of the compressed instance; attached trees map
    /// onto their copies.
    pub imt_model: InducedMinorModel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessVerdicts {
    pub midp: bool,
    pub anchored: bool,
    pub imt: bool,
}

impl WitnessVerdicts {
    pub fn all(&self) -> bool {
        self.midp && self.anchored && self.imt
    }
}

/// Witnesses for every stage from a satisfying assignment (values `0..3`),
/// each checked by its stage's verifier.
pub fn forward_witness(chain: &Chain, assignment: &[u8]) -> Result<(ForwardWitness, WitnessVerdicts)> {
    if !chain.csp.satisfied_by(assignment) {
        return invalid("assignment does not satisfy the csp");
    }
    let paths = chain.midp.paths_for(assignment);
    let anchored_model = chain.anchored.witness(&paths);
    let verdicts = WitnessVerdicts {
        midp: verify_midp_solution(&chain.midp.instance, &paths),
        anchored: verify_anchored_model(&chain.anchored.instance, &anchored_model)?,
        imt: chain.imt.verify_compressed(&anchored_model)?,
    };
    Ok((ForwardWitness { paths, imt_model: anchored_model.clone(), anchored_model }, verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binshift::bs_generate;

    #[test]
    fn unconstrained_chain_witness() {
        let csp = BinaryCsp::unconstrained(bs_generate(2).unwrap());
        let chain = build_chain(&csp, 2).unwrap();
        let (_, v) = forward_witness(&chain, &[0; 4]).unwrap();
        assert!(v.all());
        assert_eq!(chain.anchored.k, 6);
        assert_eq!(chain.imt.attachments.len(), 18);
    }

    #[test]
    fn unsatisfying_assignment_rejected() {
        let g = bs_generate(2).unwrap();
        let mut csp = BinaryCsp::unconstrained(g);
        csp.relations[0] = UNEQUAL;
        let chain = build_chain(&csp, 1).unwrap();
        assert!(forward_witness(&chain, &[0; 4]).is_err());
    }
}
