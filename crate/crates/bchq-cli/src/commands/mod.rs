pub mod bounds;
pub mod fit;
pub mod inverse;
pub mod table;
pub mod verify;
