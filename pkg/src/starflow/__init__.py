"""Social trust assisted reciprocity: max-utility circulations on social-request graphs."""
