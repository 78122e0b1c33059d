//! Page content for the bundled corpus. Section bodies use a small markup:
//! paragraphs are separated by blank lines and `[label](href)` is a link.

pub(super) struct PageDef {
    pub path: &'static str,
    pub title: &'static str,
    pub intro: &'static str,
    pub sections: &'static [(&'static str, &'static str, &'static str)],
}

pub(super) const PAGES: &[PageDef] = &[
    PageDef {
        path: "index.html",
        title: "Tessera documentation",
        intro: "Tessera is a visual platform for building data flows, training models and publishing results. \
                New users should start with the [installation guide](getting-started/installation.html) and then \
                build a [first flow](getting-started/first-flow.html).",
        sections: &[
            (
                "documentation-map",
                "Documentation map",
                "The Studio pages describe the [workspace](studio/workspace.html) and how [flows](studio/flows.html) \
                 are assembled from tasks. The Data pages cover import, connections and preparation. The Machine \
                 learning pages describe the modelling tasks, and the Deployment pages explain how to run flows on a \
                 [Tessera Server](deploy/server.html).",
            ),
        ],
    },
    PageDef {
        path: "getting-started/installation.html",
        title: "Installation",
        intro: "This page explains how to install the Tessera desktop client and activate a license.",
        sections: &[
            (
                "system-requirements",
                "System requirements",
                "The desktop client runs on Windows 10 or later, macOS 12 or later and Ubuntu 22.04. It needs at \
                 least 8 GB of memory and 4 GB of free disk space; 16 GB of memory is recommended for large datasets. \
                 A 64-bit processor is mandatory.",
            ),
            (
                "installing-the-desktop-client",
                "Installing the desktop client",
                "Download the installer for your operating system from the customer portal. Before running it, \
                 check the [system requirements](#system-requirements). Run the installer, accept the license \
                 agreement and choose an installation folder. On Linux, install the .deb package with \
                 sudo apt install ./tessera.deb.",
            ),
            (
                "activating-a-license",
                "Activating a license",
                "The first time the client starts it asks for a license key. Paste the key from the welcome e-mail \
                 into the Activation dialog and press Activate. Offline machines can use an activation file: press \
                 Export request, upload the request file to the customer portal and import the returned license \
                 file. A license can be moved to another machine by deactivating it from the Help menu first.",
            ),
        ],
    },
    PageDef {
        path: "getting-started/first-flow.html",
        title: "Your first flow",
        intro: "A short tutorial that builds, runs and saves a simple flow.",
        sections: &[
            (
                "creating-a-project",
                "Creating a project",
                "Every flow lives in a project. The client must be [activated](installation.html#activating-a-license) \
                 before a project can be created. Choose File, New project, type a name and pick the folder where \
                 the project files will be stored.",
            ),
            (
                "building-your-first-flow",
                "Building your first flow",
                "A flow usually starts by loading data, so first [import a CSV file](../data/import-csv.html#importing-a-csv-file) \
                 with the Import CSV task. Then drag a Filter task and a Decision Tree task from the task palette \
                 and connect them in order. Each task is configured in its properties panel.",
            ),
            (
                "running-the-flow",
                "Running the flow",
                "Press Compute all in the toolbar to run every task in order. A green tick marks tasks that ran \
                 successfully and a red cross marks tasks that failed; hover over the cross to read the error. \
                 Results of each task can be opened with a double click.",
            ),
        ],
    },
    PageDef {
        path: "studio/workspace.html",
        title: "The workspace",
        intro: "The Studio workspace is where flows are drawn and configured.",
        sections: &[
            (
                "workspace-layout",
                "Workspace layout",
                "The workspace is split into the project tree on the left, the canvas in the middle and the \
                 properties panel on the right. The toolbar above the canvas holds the Compute, Stop and Zoom \
                 buttons. Panels can be undocked and moved to a second screen.",
            ),
            (
                "the-task-palette",
                "The task palette",
                "The task palette lists every available task grouped by category: Import, Preparation, \
                 Modelling, Evaluation and Export. Drag a task from the palette onto the canvas to add it to the \
                 flow. The search box at the top of the palette filters tasks by name.",
            ),
            (
                "the-properties-panel",
                "The properties panel",
                "Selecting a task on the canvas shows its options in the properties panel. Changed options are \
                 highlighted in bold until the task is computed again. Press Reset to restore the default values \
                 of every option.",
            ),
        ],
    },
    PageDef {
        path: "studio/flows.html",
        title: "Flows",
        intro: "A flow is a directed graph of tasks that transforms data step by step.",
        sections: &[
            (
                "what-is-a-flow",
                "What is a flow",
                "Each task in a flow receives the output of the task before it and passes its own output on. Flows \
                 are saved inside a project and can be duplicated, exported as a .tflow file or [versioned](versioning.html).",
            ),
            (
                "connecting-tasks",
                "Connecting tasks",
                "Tasks are added from the [task palette](workspace.html#the-task-palette). To connect two tasks, \
                 drag from the output port on the right edge of one task to the input port of the next. A task \
                 can feed several downstream tasks, but each input port accepts a single connection.",
            ),
            (
                "computing-a-flow",
                "Computing a flow",
                "Compute all runs the whole flow, while Compute from here runs the selected task and everything \
                 downstream of it. Tasks whose inputs did not change are skipped. Long computations can be stopped \
                 with the Stop button; partial results are discarded.",
            ),
            (
                "flow-variables",
                "Flow variables",
                "Flow variables hold values such as file paths or thresholds that several tasks share. Define them \
                 in the Variables tab of the flow and reference them in any option as $name. Variables can be \
                 overridden when a flow is [scheduled](../deploy/scheduling.html#scheduling-a-flow).",
            ),
        ],
    },
    PageDef {
        path: "studio/versioning.html",
        title: "Versioning",
        intro: "Tessera keeps a history of saved versions for every flow.",
        sections: &[
            (
                "saving-versions",
                "Saving versions",
                "Choose Save version from the flow menu and type a short comment describing the change. Versions \
                 are numbered automatically and stored with the project. Up to fifty versions are kept per flow; \
                 the oldest is removed when the limit is reached.",
            ),
            (
                "restoring-a-version",
                "Restoring a version",
                "Open the History tab of the flow, select a version and press Restore. The current state is saved \
                 as a new version first, so restoring can always be undone. Two versions can be compared side by \
                 side with Compare.",
            ),
        ],
    },
    PageDef {
        path: "data/import-csv.html",
        title: "Importing CSV files",
        intro: "The Import CSV task reads delimited text files into a dataset.",
        sections: &[
            (
                "importing-a-csv-file",
                "Importing a CSV file",
                "Drag the Import CSV task onto the canvas and select the file in its properties panel. Press Preview \
                 to check the first hundred rows, then Compute to load the whole file. The first row is used as \
                 column names unless Header row is cleared.",
            ),
            (
                "separator-and-encoding",
                "Separator and encoding",
                "The separator is detected automatically but can be forced to comma, semicolon, tab or a custom \
                 character. Files are read as UTF-8 by default; choose Latin-1 or UTF-16 in the Encoding option for \
                 older exports. Decimal commas are supported by setting Decimal separator to comma.",
            ),
            (
                "handling-missing-values",
                "Handling missing values",
                "Empty cells are imported as missing values. Additional markers such as NA or a question mark can \
                 be listed in the Missing values option. Missing values are shown in grey in the \
                 [data manager](data-manager.html#attribute-types).",
            ),
        ],
    },
    PageDef {
        path: "data/import-database.html",
        title: "Importing from databases",
        intro: "The Import Database task reads the result of an SQL query into a dataset.",
        sections: &[
            (
                "database-import-task",
                "The Import Database task",
                "The Import Database task needs an existing [database connection](connections.html#creating-a-connection). \
                 Select the connection in the properties panel, then either pick a table from the list or write a \
                 query. Supported databases are PostgreSQL, MySQL, SQL Server, Oracle and SQLite.",
            ),
            (
                "writing-a-query",
                "Writing a query",
                "Switch Source to Query and type the SQL statement in the editor. Flow variables can be used inside \
                 the query as $name and are substituted before execution. Press Test query to fetch the first ten \
                 rows without importing the whole result.",
            ),
        ],
    },
    PageDef {
        path: "data/connections.html",
        title: "Connections",
        intro: "Connections store how Tessera reaches external databases and storage services.",
        sections: &[
            (
                "creating-a-connection",
                "Creating a connection",
                "Open the Connections view from the project tree and press New connection. Choose the database type \
                 and enter host, port and database name. The password is never stored in the project; it is kept in \
                 the [secret vault](../admin/secrets.html#the-secret-vault) and referenced by name.",
            ),
            (
                "testing-a-connection",
                "Testing a connection",
                "Press Test in the connection dialog to open a session and run a trivial query. A failed test shows \
                 the driver message, for example an authentication error or a timeout. Firewalls must allow the \
                 client or server to reach the database port.",
            ),
            (
                "sharing-connections",
                "Sharing connections",
                "Connections created on a Tessera Server are visible to every member of the project. Each user can \
                 override the credentials with their own secret.",
            ),
        ],
    },
    PageDef {
        path: "data/data-manager.html",
        title: "The data manager",
        intro: "The data manager shows the content and the structure of a dataset.",
        sections: &[
            (
                "attribute-types",
                "Attribute types",
                "Every column of a dataset is an attribute with one of five types: integer, continuous, nominal, \
                 binary or date. Types are guessed at import and can be changed in the data manager by clicking the \
                 type icon in the column header.",
            ),
            (
                "attribute-roles",
                "Attribute roles",
                "Modelling tasks read the role of each attribute. Mark the column to predict as Output and the \
                 columns the model may use as Input; columns marked Ignore are skipped. Roles are set in the data \
                 manager by right-clicking a column header and choosing Set role. A model cannot be trained until \
                 exactly one output attribute is defined.",
            ),
            (
                "editing-attributes",
                "Editing attributes",
                "Attributes can be renamed, reordered or removed in the data manager. Changes are recorded as a \
                 preparation step in the flow so that they are applied again whenever the data is reloaded.",
            ),
        ],
    },
    PageDef {
        path: "data/filtering.html",
        title: "Filtering rows",
        intro: "The Filter task keeps only the rows that satisfy a set of conditions.",
        sections: &[
            (
                "filter-task",
                "The Filter task",
                "Connect the Filter task after an import task and open its properties panel. Add one condition per \
                 row of the condition table; by default all conditions must hold. Switch Combine to Any to keep rows \
                 that satisfy at least one condition.",
            ),
            (
                "filter-conditions",
                "Filter conditions",
                "A condition compares an attribute with a value using equals, not equals, greater than, less than, \
                 between, contains or is missing. Values can reference [flow variables](../studio/flows.html#flow-variables). \
                 Date attributes accept relative values such as last 30 days.",
            ),
        ],
    },
    PageDef {
        path: "data/formulas.html",
        title: "Formulas",
        intro: "The Formula task adds computed attributes to a dataset.",
        sections: &[
            (
                "formula-task",
                "The Formula task",
                "Each row of the Formula task defines a new attribute name, its [type](data-manager.html#attribute-types) \
                 and an expression. Expressions may use arithmetic operators, comparisons and any attribute of the \
                 incoming dataset written in square brackets, for example [price] * [quantity].",
            ),
            (
                "formula-functions",
                "Formula functions",
                "Common functions include round, abs, log, if, coalesce, concat, upper and lower. The function list \
                 in the expression editor shows the signature of each function and inserts it at the cursor.",
            ),
            (
                "date-functions",
                "Date functions",
                "Dates can be manipulated with year, month, day, weekday, adddays and datediff. The today function \
                 returns the date at which the flow is computed, which makes it useful for rolling windows.",
            ),
        ],
    },
    PageDef {
        path: "ml/classification.html",
        title: "Classification",
        intro: "Classification tasks learn to predict a nominal or binary output attribute.",
        sections: &[
            (
                "decision-tree-task",
                "The Decision Tree task",
                "Before training, define the [output attribute](../data/data-manager.html#attribute-roles) and the \
                 input attributes of the dataset. Connect the Decision Tree task after the data and press Compute. \
                 The tree is shown in the results view, where each node reports the number of samples and the \
                 majority class.",
            ),
            (
                "rule-learning-task",
                "The Rule Learning task",
                "The Rule Learning task produces a set of readable if-then rules instead of a tree. Each rule lists \
                 its conditions, the predicted class, its covering and its error. Rules can be exported to a \
                 spreadsheet for review by domain experts.",
            ),
            (
                "tuning-a-classifier",
                "Tuning a classifier",
                "Maximum depth and minimum samples per leaf control the size of a tree; smaller trees generalise \
                 better. Class weights help when one class is rare. Always check the effect of a change on a \
                 [held-out test set](evaluation.html#splitting-data).",
            ),
        ],
    },
    PageDef {
        path: "ml/regression.html",
        title: "Regression",
        intro: "Regression tasks predict a continuous output attribute.",
        sections: &[
            (
                "regression-task",
                "The Regression task",
                "The Regression task fits a linear model to the continuous [output attribute](../data/data-manager.html#attribute-roles). \
                 Nominal inputs are one-hot encoded automatically. The results view lists each coefficient with \
                 its standard error and p-value.",
            ),
            (
                "regularization",
                "Regularization",
                "Set Penalty to Ridge or Lasso to shrink coefficients and reduce overfitting. The Lambda option \
                 controls the strength of the penalty; leave it on Auto to choose it by cross-validation.",
            ),
        ],
    },
    PageDef {
        path: "ml/clustering.html",
        title: "Clustering",
        intro: "Clustering groups similar rows without an output attribute.",
        sections: &[
            (
                "k-means-task",
                "The K-Means task",
                "The K-Means task assigns every row to one of k clusters. Only continuous and integer attributes are \
                 used; [normalise them](../data/formulas.html#formula-task) first so that no attribute dominates the \
                 distance. The result adds a cluster attribute to the dataset.",
            ),
            (
                "choosing-k",
                "Choosing the number of clusters",
                "Run K-Means for several values of k and compare the within-cluster sum of squares. The elbow chart \
                 in the results view plots this value against k; pick the point where the curve flattens.",
            ),
        ],
    },
    PageDef {
        path: "ml/evaluation.html",
        title: "Model evaluation",
        intro: "Evaluation tasks measure how well a model performs on data it has not seen.",
        sections: &[
            (
                "splitting-data",
                "Splitting data",
                "The Split task divides a dataset into a training set and a test set. The default split keeps 70 \
                 percent of the rows for training; choose Stratified to preserve the class proportions. Set a seed to \
                 make the split reproducible.",
            ),
            (
                "confusion-matrix",
                "Confusion matrix",
                "Connect the Evaluate task to a trained classifier and to the [test set](#splitting-data). The \
                 confusion matrix counts predictions per actual and predicted class; accuracy, precision and recall \
                 per class are listed below it.",
            ),
            (
                "roc-curves",
                "ROC curves",
                "For binary outputs the Evaluate task also draws the ROC curve and reports the area under it. Move \
                 the threshold slider to see how precision and recall change.",
            ),
        ],
    },
    PageDef {
        path: "deploy/server.html",
        title: "Tessera Server",
        intro: "Tessera Server runs flows without a desktop session and hosts shared projects.",
        sections: &[
            (
                "server-installation",
                "Server installation",
                "Tessera Server is distributed as a Docker image and as a Linux package. With Docker, run \
                 docker compose up -d in the folder containing the supplied compose file. The server needs 4 CPU \
                 cores, 16 GB of memory and a PostgreSQL database for its metadata.",
            ),
            (
                "configuring-ports",
                "Configuring ports",
                "The web interface listens on port 8443 and the client API on port 9443. Both ports are set in \
                 server.yaml and must be opened in the firewall. Restart the service after changing the file.",
            ),
            (
                "connecting-the-client",
                "Connecting the client",
                "In the desktop client choose File, Connect to server and enter the server address with port 9443. \
                 Log in with a [user account](../admin/users.html#user-accounts) created by an administrator. Projects \
                 stored on the server then appear in the project tree.",
            ),
        ],
    },
    PageDef {
        path: "deploy/scheduling.html",
        title: "Scheduling flows",
        intro: "Scheduled flows run automatically on Tessera Server at fixed times.",
        sections: &[
            (
                "scheduling-a-flow",
                "Scheduling a flow",
                "Scheduling requires a running [Tessera Server](server.html#server-installation); the desktop client \
                 cannot run flows on its own schedule. Open the flow on the server, choose Schedule from the flow menu \
                 and set when it should run. Flow variables can be overridden for each schedule.",
            ),
            (
                "cron-expressions",
                "Cron expressions",
                "Schedules use five-field cron expressions: minute, hour, day of month, month and day of week. For \
                 example 0 2 * * * runs every night at 02:00 and 30 6 * * 1 runs every Monday at 06:30. Times use \
                 the server time zone.",
            ),
            (
                "retry-policy",
                "Retry policy",
                "A failed run can be retried automatically. Set Retries to the number of attempts and Delay to the \
                 wait between them. After the last failed attempt the owner of the schedule receives an e-mail with \
                 the error log.",
            ),
        ],
    },
    PageDef {
        path: "deploy/export.html",
        title: "Exporting results",
        intro: "Export tasks write datasets and models outside Tessera.",
        sections: &[
            (
                "export-task",
                "The Export task",
                "The Export task writes its input dataset to a file or a database table. Writing to a database uses \
                 a [connection](../data/connections.html#creating-a-connection) and can either append rows or replace \
                 the table.",
            ),
            (
                "export-formats",
                "Export formats",
                "Files can be written as CSV, Excel, Parquet or JSON. Models are exported as PMML or as a Tessera \
                 model file that other flows can load with the Import Model task.",
            ),
        ],
    },
    PageDef {
        path: "dashboards/dashboards.html",
        title: "Dashboards",
        intro: "Dashboards present flow results as charts and tables.",
        sections: &[
            (
                "creating-a-dashboard",
                "Creating a dashboard",
                "Choose New dashboard in the project tree and give it a name. A dashboard reads the results of one or \
                 more flows in the same project, so [compute the flow](../studio/flows.html#computing-a-flow) before \
                 adding widgets.",
            ),
            (
                "widgets",
                "Widgets",
                "Widgets are added from the Widgets panel: bar chart, line chart, pie chart, table, indicator and \
                 text. Each widget is bound to a task result and to one or more attributes. Filters placed on the \
                 dashboard apply to every widget bound to the same dataset.",
            ),
            (
                "sharing-dashboards",
                "Sharing dashboards",
                "Dashboards published on Tessera Server can be shared with [user groups](../admin/users.html#user-groups). \
                 Press Share, pick the groups and choose between view and edit access. Shared dashboards refresh \
                 whenever the underlying flow is computed by a schedule.",
            ),
        ],
    },
    PageDef {
        path: "admin/users.html",
        title: "Users and permissions",
        intro: "Administrators manage who can access Tessera Server and what they can do.",
        sections: &[
            (
                "user-accounts",
                "User accounts",
                "Administrators create accounts in the Users page of the server web interface by entering a user \
                 name and an e-mail address. The user receives a link to set a password. Accounts can also be \
                 synchronised from LDAP or Active Directory.",
            ),
            (
                "user-groups",
                "User groups",
                "Groups collect users that need the same access. Create a group in the Groups page, add members and \
                 assign it to projects. A user can belong to any number of groups.",
            ),
            (
                "permissions",
                "Permissions",
                "Each project grants its groups one of three levels: viewer, editor or owner. Viewers can open \
                 results and dashboards, editors can change and compute flows, and owners can also manage schedules \
                 and sharing.",
            ),
        ],
    },
    PageDef {
        path: "admin/secrets.html",
        title: "Secrets",
        intro: "Secrets keep passwords and tokens out of project files.",
        sections: &[
            (
                "the-secret-vault",
                "The secret vault",
                "The secret vault stores passwords, API tokens and keys encrypted with AES-256. Open Settings, \
                 Secrets and press Add secret to store a value under a name. Connections and tasks refer to the \
                 secret by that name, never by its value.",
            ),
            (
                "rotating-secrets",
                "Rotating secrets",
                "To rotate a secret, edit its value in the vault; every connection that references it uses the new \
                 value on the next run. The vault keeps an audit log of who changed each secret and when.",
            ),
        ],
    },
];

/// (query_id, question, reference). References combine the section a
/// question is about with the prerequisite it links to.
pub(super) const CASES: &[(&str, &str, &str)] = &[
    (
        "q01",
        "How do I schedule a flow to run every night?",
        "Scheduling requires a running Tessera Server, which is installed as a Docker image with docker compose up -d \
         or as a Linux package and needs a PostgreSQL database. Open the flow on the server, choose Schedule from the \
         flow menu and use a cron expression such as 0 2 * * * to run it every night at 02:00.",
    ),
    (
        "q02",
        "How can I import a table from a PostgreSQL database?",
        "First create a database connection in the Connections view: press New connection, choose PostgreSQL and \
         enter host, port and database name, with the password kept in the secret vault. Then add the Import Database \
         task, select the connection and pick the table or write a query.",
    ),
    (
        "q03",
        "How do I train a decision tree?",
        "Define the roles of the attributes first: in the data manager mark the column to predict as Output and the \
         predictors as Input. Then connect the Decision Tree task after the data and press Compute; the tree appears in \
         the results view with samples and majority class per node.",
    ),
    (
        "q04",
        "What do I need before creating my first project?",
        "The client must be activated with a license key pasted into the Activation dialog, or with an activation file \
         on offline machines. Then choose File, New project, type a name and pick the folder for the project files.",
    ),
    (
        "q05",
        "How do I build my first flow?",
        "Start by importing data with the Import CSV task, selecting the file and pressing Compute. Then drag a Filter \
         task and a Decision Tree task from the task palette, connect them in order and configure each in its \
         properties panel.",
    ),
    (
        "q06",
        "How are database passwords stored for connections?",
        "Passwords are never stored in the project. They are kept in the secret vault, encrypted with AES-256, and \
         connections refer to the secret by name. Add a secret from Settings, Secrets, Add secret.",
    ),
    (
        "q07",
        "How do I connect tasks in a flow?",
        "Add tasks by dragging them from the task palette onto the canvas. Then drag from the output port of one task \
         to the input port of the next; each input port accepts a single connection.",
    ),
    (
        "q08",
        "How do I share a dashboard with my team?",
        "Publish the dashboard on Tessera Server and press Share, then pick the user groups and choose view or edit \
         access. Groups are created by administrators in the Groups page, where members are added and the group is \
         assigned to projects.",
    ),
    (
        "q09",
        "How do I connect the desktop client to a server?",
        "Choose File, Connect to server and enter the server address with port 9443. Log in with a user account that \
         an administrator created in the Users page of the server web interface; the user sets a password from the \
         e-mail link.",
    ),
    (
        "q10",
        "How can I see a confusion matrix for my classifier?",
        "Split the data with the Split task into a training set and a test set, 70 percent for training by default. \
         Connect the Evaluate task to the trained classifier and to the test set; it shows the confusion matrix with \
         accuracy, precision and recall per class.",
    ),
    (
        "q11",
        "How do I use a flow variable in a filter condition?",
        "Define the variable in the Variables tab of the flow and reference it as $name. In the Filter task add a \
         condition comparing an attribute with the variable, for example greater than $threshold.",
    ),
    (
        "q12",
        "How do I export results to a database table?",
        "Use the Export task with a database connection created in the Connections view. The Export task can append \
         rows to the table or replace it.",
    ),
    (
        "q13",
        "How do I prepare data for K-Means clustering?",
        "K-Means uses only continuous and integer attributes, so normalise them first with the Formula task, which \
         defines new attributes with an expression such as ([x] - 10) / 5. Then run K-Means and compare values of k \
         with the elbow chart.",
    ),
    (
        "q14",
        "How do I add a computed column?",
        "Use the Formula task: each row defines a new attribute name, its type (integer, continuous, nominal, binary or \
         date) and an expression that references attributes in square brackets, for example [price] * [quantity].",
    ),
    (
        "q15",
        "What are the system requirements for installing the desktop client?",
        "The client runs on Windows 10 or later, macOS 12 or later and Ubuntu 22.04, with at least 8 GB of memory, 16 GB \
         recommended, 4 GB of free disk space and a 64-bit processor. Download the installer from the customer portal \
         and run it.",
    ),
    (
        "q16",
        "How do I fit a linear regression model?",
        "Mark the continuous column to predict as the Output attribute and the predictors as Input in the data manager. \
         The Regression task then fits a linear model and lists each coefficient with its standard error and p-value.",
    ),
    (
        "q17",
        "How do I create a dashboard from my flow results?",
        "Compute the flow first with Compute all, since a dashboard reads the results of flows in the same project. \
         Then choose New dashboard in the project tree and add widgets such as charts and tables bound to task results.",
    ),
    (
        "q18",
        "How are missing values handled when importing a CSV file?",
        "Empty cells become missing values, and extra markers such as NA can be listed in the Missing values option. \
         Missing values appear in grey in the data manager, where each attribute has a type such as integer or date.",
    ),
    (
        "q19",
        "How do I check that a tuned classifier generalises?",
        "Smaller trees generalise better, so tune maximum depth and minimum samples per leaf. Check every change on a \
         held-out test set created by the Split task, which keeps 70 percent of rows for training and can be \
         stratified.",
    ),
    (
        "q20",
        "How do I restore an older version of a flow?",
        "Open the History tab of the flow, select a version and press Restore; the current state is saved as a new \
         version first. Versions are created with Save version and a short comment, and up to fifty are kept.",
    ),
];
