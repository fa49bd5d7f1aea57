from scaling_witness.commands import search, state
