"""The count, series, asymptotic, table and verify commands."""
