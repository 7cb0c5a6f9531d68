from grcp.cli import main

raise SystemExit(main())
