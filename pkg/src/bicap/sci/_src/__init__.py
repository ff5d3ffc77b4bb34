"""Strong capacitary inequality harness."""
