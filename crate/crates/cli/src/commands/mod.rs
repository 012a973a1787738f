pub mod compare;
pub mod decompose;
pub mod figures;
pub mod lb;
pub mod qsim;
