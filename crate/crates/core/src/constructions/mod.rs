//! Explicit constructions behind the entropy bounds: the separated packing
//! family, the admissible packing modulus ρ, the coefficient-grid ε-net,
//! truncation, and the resulting lower/upper bound curves.

mod curves;
mod net;
mod packing;
mod rho;

pub use curves::{koebe_sharpness_lower, lower_bound_curve, upper_bound_curve, CurvePoint};
pub use net::{net_upper_point, quantize_to_net, truncate, NetCertificate};
pub use packing::{
    packing_certificate, packing_certificate_in, packing_member, packing_member_in,
    packing_members, packing_members_in, PackingCertificate, PackingFamily,
};
pub use rho::{compute_rho, Rho};

/// Serializes a `u128` as a decimal string: JSON numbers only cover the
/// `u64` range, and certified counts routinely exceed it.
pub(crate) fn u128_as_string<S: serde::Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
