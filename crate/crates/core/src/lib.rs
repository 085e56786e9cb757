pub mod exact;
pub mod modgroup;
pub mod moonshine;
pub mod qseries;
