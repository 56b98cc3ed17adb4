# Tests for bisqueeze
