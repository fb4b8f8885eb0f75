// Stubs pending.
