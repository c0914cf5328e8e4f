//! Concrete 4-symmetric spaces and the twistor embedding `g G0 -> g J0 g^-1`.

mod classify;
mod families;
mod spec;

pub use classify::{
    classify_complex_component, classify_real_component, complex_structure_chirality, enumerate_complex_classes, enumerate_real_classes, ComplexClass,
    RealClass,
};
pub use families::{affine_spec, complex_grassmannian_spec, real_grassmannian_spec, sphere_spec};
pub use spec::{fibre_orbit, Family, FourSymmetricSpec, GroupSampler, OrbitEstimate, TwistorPoint};
