//! Checkers for the two definitional tracks.
