pub mod export;
pub mod params;
pub mod simulate;
pub mod tables;
pub mod verify;
