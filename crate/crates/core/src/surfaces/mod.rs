mod generators;
mod immersion;
mod lift;

pub use generators::{
    bump_rho, catenoid, clifford_torus, clifford_torus_immersion, cone, cylinder, g0_geodesic_frames, geodesic_cylinder, helicoid,
    inversion, plane, sphere_patch,
};
pub use immersion::{
    omega_isotropy, rho_energy_density, rho_harmonicity, rho_surface, sphere_tension, ConformalityReport, ImmersionGrid,
    IsotropyReport, IMMERSION_FLOOR,
};
pub use lift::{
    hopf_lift, lc_omega_check, lifted_form, surface_report, LcVerdict, LiftedForm, LiftedImmersion, SurfaceReport, C_FLAT,
    C_LAMBDA, C_RHO,
};
