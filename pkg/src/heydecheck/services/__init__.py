"""Services for heydecheck."""
